#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermocc/modem.hpp"
#include "thermocc/thermal_env.hpp"
#include "thermocc/types.hpp"

namespace thermocc {

struct OpcodeInfo {
    std::string name;
    std::size_t payload_bits = 0;
};

/// Opcode -> (name, fixed payload length). Payload lengths are per-opcode
/// constants so the receiver knows how many slots a frame occupies.
class OpcodeTable {
public:
    static OpcodeTable default_table();

    void set(std::uint8_t opcode, std::string name, std::size_t payload_bits);
    const OpcodeInfo* find(std::uint8_t opcode) const;
    const std::map<std::uint8_t, OpcodeInfo>& entries() const { return entries_; }

private:
    std::map<std::uint8_t, OpcodeInfo> entries_;
};

/// Frame layout on the wire: preamble "10", 3-bit opcode (MSB first),
/// optional parity bit, n-bit payload (MSB first).
struct Frame {
    std::uint8_t opcode = 0;
    bool parity_present = true;
    std::uint8_t parity = 0;
    BitStream payload;

    std::size_t bit_length() const { return 2 + 3 + (parity_present ? 1 : 0) + payload.size(); }
    /// Full wire bits including the preamble.
    BitStream serialize() const;
};

enum class RejectReason { ParityFail, UnknownOpcode, Truncated };
const char* to_string(RejectReason r);

struct ParseResult {
    std::optional<Frame> frame;
    RejectReason reason = RejectReason::Truncated;
    std::size_t position = 0;  // bit index of the failure

    bool ok() const { return frame.has_value(); }
};

/// Serialize a frame; the payload length must match the opcode table entry.
/// Parity covers opcode and payload bits (even parity).
BitStream build_frame(std::uint8_t opcode, const BitStream& payload, bool parity_present,
                      const OpcodeTable& table);

/// Parse the bits that follow a detected preamble (opcode ++ parity ++
/// payload). Never partially accepts: any parity mismatch, unknown opcode or
/// short stream yields a rejection with its bit position.
ParseResult parse_frame(std::span<const std::uint8_t> bits_after_preamble,
                        const OpcodeTable& table, bool parity_present);

/// Transmitter-side "10" preamble: a rise targeting temp_H whose duration is
/// the time to reach the target from start_temp (bounded by rise_timeout_s,
/// default 3 * diff_D / ascent_rate), then one slot_T targeting temp_L.
/// start_temp defaults to env.ambient_temp.
TargetSchedule preamble_schedule(const ChannelParams& params, const EnvironmentModel& env,
                                 std::optional<double> start_temp = std::nullopt,
                                 std::optional<double> rise_timeout_s = std::nullopt);

struct PreambleDetection {
    std::size_t anchor = 0;            // rise-to-fall turning point, smoothed index
    std::vector<SlotRange> slot_grid;  // all slots that fit after the anchor
};

/// Scan a smoothed trace for the preamble signature: a rise of at least
/// diff_D/2 followed by a fall of diff_D/2 whose drop takes slot_T +/- 25%.
/// Returns the first match at or after from_index, or nothing.
std::optional<PreambleDetection> detect_preamble(const TemperatureTrace& smoothed,
                                                 const ChannelParams& params,
                                                 std::size_t from_index = 0);

enum class RxEventKind { PreambleDetected, Bit, FrameAccepted, FrameRejected };
const char* to_string(RxEventKind k);

struct RxEvent {
    RxEventKind kind = RxEventKind::Bit;
    std::size_t position = 0;  // smoothed-trace sample index
    int bit = -1;
    std::optional<Frame> frame;
    std::optional<RejectReason> reason;
};

/// Optional reception gate: the receiver only listens inside
/// [start_s, start_s + duration_s) of trace time.
struct RxWindow {
    double start_s = 0.0;
    double duration_s = 0.0;
};

/// Receiver protocol engine. Sequential, single-owner; run one instance per
/// simulated receiver. On a rejected frame the search resumes one slot after
/// the failed preamble's anchor so a true preamble inside a false
/// transmission is still caught.
class RxStateMachine {
public:
    RxStateMachine(ChannelParams params, OpcodeTable table, bool parity_present = true,
                   std::optional<RxWindow> window = std::nullopt);

    /// Offline decode of a full smoothed trace.
    std::vector<RxEvent> run(const TemperatureTrace& smoothed) const;

private:
    ChannelParams params_;
    OpcodeTable table_;
    bool parity_present_;
    std::optional<RxWindow> window_;
};

std::vector<RxEvent> rx_state_machine(const TemperatureTrace& smoothed,
                                      const ChannelParams& params, const OpcodeTable& table,
                                      bool parity_present = true,
                                      std::optional<RxWindow> window = std::nullopt);

/// Per-position majority vote over frame copies received by cooperating
/// peers. Requires >= 2 copies of expected_length bits. Ties go to the first
/// copy whose frame passes parity, else to 0.
BitStream majority_vote(std::span<const BitStream> copies, std::size_t expected_length,
                        bool parity_present = true);

/// Labeled dump with the payload in hex, MSB first.
std::string frame_hex_dump(const Frame& frame, const OpcodeTable& table);

}  // namespace thermocc
