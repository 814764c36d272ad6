#include "thermocc/framing.hpp"

#include <algorithm>
#include <cmath>

#include "thermocc/bits.hpp"

namespace thermocc {

const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::ParityFail: return "PARITY_FAIL";
        case RejectReason::UnknownOpcode: return "UNKNOWN_OPCODE";
        case RejectReason::Truncated: return "TRUNCATED";
    }
    return "UNKNOWN";
}

const char* to_string(RxEventKind k) {
    switch (k) {
        case RxEventKind::PreambleDetected: return "PREAMBLE_DETECTED";
        case RxEventKind::Bit: return "BIT";
        case RxEventKind::FrameAccepted: return "FRAME_ACCEPTED";
        case RxEventKind::FrameRejected: return "FRAME_REJECTED";
    }
    return "UNKNOWN";
}

OpcodeTable OpcodeTable::default_table() {
    OpcodeTable t;
    t.set(0b000, "ChangeEncryptionKey", 128);
    t.set(0b001, "SelfDestruct", 1);
    t.set(0b010, "SearchAndDelete", 64);
    t.set(0b011, "DisableAsset", 8);
    t.set(0b100, "MoveToStaging", 16);
    return t;
}

void OpcodeTable::set(std::uint8_t opcode, std::string name, std::size_t payload_bits) {
    if (opcode > 0b111) throw Error("opcode must fit in 3 bits");
    if (payload_bits < 1) throw Error("opcode payload length must be >= 1");
    entries_[opcode] = OpcodeInfo{std::move(name), payload_bits};
}

const OpcodeInfo* OpcodeTable::find(std::uint8_t opcode) const {
    auto it = entries_.find(opcode);
    return it == entries_.end() ? nullptr : &it->second;
}

BitStream Frame::serialize() const {
    BitStream bits;
    bits.reserve(bit_length());
    bits.push_back(1);
    bits.push_back(0);
    for (int k = 2; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((opcode >> k) & 1));
    if (parity_present) bits.push_back(parity & 1);
    bits.insert(bits.end(), payload.begin(), payload.end());
    return bits;
}

BitStream build_frame(std::uint8_t opcode, const BitStream& payload, bool parity_present,
                      const OpcodeTable& table) {
    const OpcodeInfo* info = table.find(opcode);
    if (!info) throw Error("build_frame: opcode not in table");
    if (payload.size() != info->payload_bits) {
        throw Error("build_frame: payload length " + std::to_string(payload.size()) +
                    " does not match opcode '" + info->name + "' (" +
                    std::to_string(info->payload_bits) + " bits)");
    }
    Frame f;
    f.opcode = opcode;
    f.parity_present = parity_present;
    f.payload = payload;
    if (parity_present) {
        BitStream covered;
        for (int k = 2; k >= 0; --k) covered.push_back(static_cast<std::uint8_t>((opcode >> k) & 1));
        covered.insert(covered.end(), payload.begin(), payload.end());
        f.parity = parity_even(covered);
    }
    return f.serialize();
}

ParseResult parse_frame(std::span<const std::uint8_t> bits, const OpcodeTable& table,
                        bool parity_present) {
    ParseResult result;
    const std::size_t header = 3u + (parity_present ? 1u : 0u);
    if (bits.size() < header) {
        result.reason = RejectReason::Truncated;
        result.position = bits.size();
        return result;
    }
    std::uint8_t opcode = 0;
    for (std::size_t k = 0; k < 3; ++k) opcode = static_cast<std::uint8_t>((opcode << 1) | (bits[k] & 1));

    const OpcodeInfo* info = table.find(opcode);
    if (!info) {
        result.reason = RejectReason::UnknownOpcode;
        result.position = 3;
        return result;
    }
    if (bits.size() < header + info->payload_bits) {
        result.reason = RejectReason::Truncated;
        result.position = bits.size();
        return result;
    }
    if (bits.size() > header + info->payload_bits) {
        // The stream must be exactly one frame; anything longer means the
        // opcode was misread (a flipped opcode bit reinterprets the length).
        result.reason = RejectReason::Truncated;
        result.position = header + info->payload_bits;
        return result;
    }

    Frame f;
    f.opcode = opcode;
    f.parity_present = parity_present;
    f.payload.assign(bits.begin() + header, bits.begin() + header + info->payload_bits);
    if (parity_present) {
        f.parity = bits[3] & 1;
        BitStream covered(bits.begin(), bits.begin() + 3);
        covered.insert(covered.end(), f.payload.begin(), f.payload.end());
        if (parity_even(covered) != f.parity) {
            result.reason = RejectReason::ParityFail;
            result.position = 3;
            return result;
        }
    }
    result.frame = std::move(f);
    return result;
}

TargetSchedule preamble_schedule(const ChannelParams& params, const EnvironmentModel& env,
                                 std::optional<double> start_temp,
                                 std::optional<double> rise_timeout_s) {
    params.validate();
    env.validate();
    const double start = start_temp.value_or(env.ambient_temp);
    const double timeout = rise_timeout_s.value_or(3.0 * params.diff_D / env.ascent_per_s());

    // The '1': heat until the readable state is reached (bounded by the
    // timeout). The '0': one slot back toward temp_L.
    double rise_s;
    if (start < params.temp_H) {
        rise_s = (params.temp_H - start) / env.ascent_per_s();
    } else {
        rise_s = 0.0;
    }
    rise_s = std::min(rise_s, timeout);
    rise_s = std::max(rise_s, 1.0 / params.sample_rate);  // keep the segment non-degenerate

    TargetSchedule schedule;
    schedule.append(rise_s, params.temp_H);
    schedule.append(params.slot_T, params.temp_L);
    return schedule;
}

std::optional<PreambleDetection> detect_preamble(const TemperatureTrace& smoothed,
                                                 const ChannelParams& params,
                                                 std::size_t from_index) {
    const auto& s = smoothed.samples;
    const std::size_t n = s.size();
    if (from_index >= n) return std::nullopt;

    // Floor quantization can swallow up to gamma of a swing (a rise from a
    // level sitting exactly on a quantization boundary reads one step short,
    // and the post-preamble fall is one slot's worth minus that). Both
    // confirm thresholds are gamma-compensated.
    const double swing_thr =
        std::max(params.diff_D / 4.0, params.diff_D / 2.0 - params.gamma);
    const double rise_thr = swing_thr;
    const double fall_thr = swing_thr;
    const double anchor_eps = params.diff_D / 4.0;  // plateau membership band
    const std::size_t slot = params.slot_samples();
    const std::size_t quarter = slot / 4;

    bool rising_confirmed = false;
    double run_min = s[from_index];
    double run_max = 0.0;
    std::size_t peak_i = from_index;

    for (std::size_t i = from_index; i < n; ++i) {
        const double v = s[i];
        if (!rising_confirmed) {
            if (v < run_min) run_min = v;
            if (v - run_min >= rise_thr) {
                rising_confirmed = true;
                run_max = v;
                peak_i = i;
            }
            continue;
        }
        if (v > run_max) {
            run_max = v;
            peak_i = i;
        }
        if (run_max - v >= fall_thr) {
            // Candidate turning point: midpoint of the near-peak plateau
            // (quantization flattens the peak symmetrically around it).
            std::size_t lo = peak_i;
            while (lo > from_index && s[lo - 1] >= run_max - anchor_eps) --lo;
            std::size_t hi = peak_i;
            while (hi + 1 <= i && s[hi + 1] >= run_max - anchor_eps) ++hi;
            const std::size_t anchor = (lo + hi) / 2;

            // The fall must proceed at slot pace: a drop of fall_thr within
            // one slot of the anchor, but not diff_D/2 already within a
            // quarter slot (too fast for the transmitter's descent rate).
            if (anchor + slot >= n) return std::nullopt;  // not enough trace to decide
            const double drop_quarter = s[anchor] - s[anchor + quarter];
            const double drop_slot = s[anchor] - s[anchor + slot];
            if (drop_slot >= fall_thr && drop_quarter <= params.diff_D / 2.0) {
                PreambleDetection det;
                det.anchor = anchor;
                det.slot_grid =
                    slot_grid_from_anchor(anchor, slots_available(anchor, n, params), params);
                return det;
            }
            // Wrong timescale: not a preamble. Restart the scan from here.
            rising_confirmed = false;
            run_min = v;
        }
    }
    return std::nullopt;
}

RxStateMachine::RxStateMachine(ChannelParams params, OpcodeTable table, bool parity_present,
                               std::optional<RxWindow> window)
    : params_(std::move(params)),
      table_(std::move(table)),
      parity_present_(parity_present),
      window_(window) {}

std::vector<RxEvent> RxStateMachine::run(const TemperatureTrace& smoothed) const {
    std::vector<RxEvent> events;
    std::size_t lo = 0;
    std::size_t hi = smoothed.size();
    if (window_) {
        // Gate the listening range by trace time.
        const double w0 = window_->start_s;
        const double w1 = window_->start_s + window_->duration_s;
        while (lo < hi && smoothed.time_at(lo) < w0) ++lo;
        while (hi > lo && smoothed.time_at(hi - 1) >= w1) --hi;
    }
    if (lo >= hi) return events;

    const std::size_t slot_step = params_.slot_samples();
    std::size_t search_from = lo;

    while (search_from < hi) {
        auto det = detect_preamble(smoothed, params_, search_from);
        if (!det || det->anchor >= hi) break;

        events.push_back({RxEventKind::PreambleDetected, det->anchor, -1, {}, {}});

        // Clip the grid to the listening range.
        std::vector<SlotRange> grid;
        for (const SlotRange& slot : det->slot_grid) {
            if (slot.end <= hi) grid.push_back(slot);
        }

        const std::size_t resume_on_fail = det->anchor + slot_step;
        const std::size_t header_bits = 3u + (parity_present_ ? 1u : 0u);

        BitStream decoded;
        std::uint8_t prev = 0;  // the preamble's trailing '0'
        std::size_t consumed = 0;
        std::optional<RejectReason> failure;
        std::size_t failure_pos = 0;
        std::size_t payload_bits = 0;

        auto take_bit = [&]() -> bool {
            if (consumed >= grid.size()) return false;
            const SlotRange slot = grid[consumed];
            Trend trend;
            try {
                trend = classify_trend(smoothed, slot, params_.mu);
            } catch (const Error&) {
                return false;
            }
            std::uint8_t bit = prev;
            if (trend == Trend::Up) bit = 1;
            else if (trend == Trend::Down) bit = 0;
            decoded.push_back(bit);
            events.push_back({RxEventKind::Bit, slot.begin, bit, {}, {}});
            prev = bit;
            ++consumed;
            return true;
        };

        // Header: opcode and parity.
        for (std::size_t k = 0; k < header_bits && !failure; ++k) {
            if (!take_bit()) {
                failure = RejectReason::Truncated;
                failure_pos = consumed < grid.size() ? grid[consumed].begin : hi;
            }
        }
        if (!failure) {
            std::uint8_t opcode = 0;
            for (std::size_t k = 0; k < 3; ++k) opcode = static_cast<std::uint8_t>((opcode << 1) | decoded[k]);
            const OpcodeInfo* info = table_.find(opcode);
            if (!info) {
                failure = RejectReason::UnknownOpcode;
                failure_pos = grid[consumed - 1].end;
            } else {
                payload_bits = info->payload_bits;
            }
        }
        for (std::size_t k = 0; k < payload_bits && !failure; ++k) {
            if (!take_bit()) {
                failure = RejectReason::Truncated;
                failure_pos = consumed < grid.size() ? grid[consumed].begin : hi;
            }
        }

        if (!failure) {
            const ParseResult parsed = parse_frame(decoded, table_, parity_present_);
            if (parsed.ok()) {
                const std::size_t end_pos = grid[consumed - 1].end;
                events.push_back({RxEventKind::FrameAccepted, end_pos, -1, parsed.frame, {}});
                search_from = end_pos;
                continue;
            }
            failure = parsed.reason;
            failure_pos = grid[consumed - 1].end;
        }

        events.push_back({RxEventKind::FrameRejected, failure_pos, -1, {}, failure});
        search_from = std::max(resume_on_fail, search_from + 1);
    }
    return events;
}

std::vector<RxEvent> rx_state_machine(const TemperatureTrace& smoothed,
                                      const ChannelParams& params, const OpcodeTable& table,
                                      bool parity_present, std::optional<RxWindow> window) {
    return RxStateMachine(params, table, parity_present, window).run(smoothed);
}

BitStream majority_vote(std::span<const BitStream> copies, std::size_t expected_length,
                        bool parity_present) {
    if (copies.size() < 2) throw Error("majority_vote: need at least 2 receiver copies");
    for (const BitStream& c : copies) {
        if (c.size() != expected_length) {
            throw Error("majority_vote: copy length " + std::to_string(c.size()) +
                        " does not match expected " + std::to_string(expected_length));
        }
    }

    // Parity validity per copy, for the tie-break. Copies are post-preamble
    // frame bits: opcode ++ parity ++ payload.
    std::vector<bool> parity_ok(copies.size(), false);
    if (parity_present) {
        for (std::size_t c = 0; c < copies.size(); ++c) {
            if (expected_length < 4) continue;
            BitStream covered(copies[c].begin(), copies[c].begin() + 3);
            covered.insert(covered.end(), copies[c].begin() + 4, copies[c].end());
            parity_ok[c] = parity_even(covered) == (copies[c][3] & 1);
        }
    }

    BitStream out(expected_length, 0);
    for (std::size_t i = 0; i < expected_length; ++i) {
        std::size_t ones = 0;
        for (const BitStream& c : copies) ones += (c[i] & 1);
        const std::size_t zeros = copies.size() - ones;
        if (ones > zeros) {
            out[i] = 1;
        } else if (ones < zeros) {
            out[i] = 0;
        } else {
            // Tie: trust the first parity-valid receiver, else default to 0.
            out[i] = 0;
            for (std::size_t c = 0; c < copies.size(); ++c) {
                if (parity_ok[c]) {
                    out[i] = copies[c][i] & 1;
                    break;
                }
            }
        }
    }
    return out;
}

std::string frame_hex_dump(const Frame& frame, const OpcodeTable& table) {
    const OpcodeInfo* info = table.find(frame.opcode);
    std::string opcode_bits;
    for (int k = 2; k >= 0; --k) opcode_bits.push_back(((frame.opcode >> k) & 1) ? '1' : '0');
    std::string out = "frame: opcode=" + opcode_bits;
    out += " (" + (info ? info->name : std::string("?")) + ")";
    if (frame.parity_present) out += " parity=" + std::to_string(frame.parity & 1);
    out += " payload_bits=" + std::to_string(frame.payload.size());
    out += " payload_hex=" + hex_from_bits(frame.payload);
    return out;
}

}  // namespace thermocc
