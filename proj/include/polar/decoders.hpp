#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "polar/channel.hpp"
#include "polar/core.hpp"
#include "polar/llr_ops.hpp"

namespace polar {

struct DecodeOutput {
    BitVector info_bits;     // payload, CRC stripped when the spec carries one
    BitVector u_hat;         // length N; frozen positions hold the frozen values
    BitVector codeword_hat;  // polar_transform(u_hat)
    double metric = 0.0;     // path metric where the decoder defines one
    std::optional<LlrVector> soft_out;  // BP / SCAN left-edge LLRs
    std::optional<bool> crc_ok;
};

struct OpStats {
    std::uint64_t f_ops = 0;
    std::uint64_t g_ops = 0;
};

// u_hat -> DecodeOutput: re-encodes, splits out the payload, checks CRC.
DecodeOutput assemble_output(BitVector u_hat, const CodeSpec& spec, double metric);

// Depth-first successive cancellation. Frozen leaves take their frozen
// values; information leaves hard-decide with L >= 0 -> 0.
DecodeOutput sc_decode(const LlrVector& llr, const CodeSpec& spec, OpMode mode,
                       OpStats* stats = nullptr);

// SC with Rate-0/Rate-1 subtree shortcuts. Bit-exactly equal to sc_decode;
// a Rate-1 node falls back to the plain schedule if any of its input LLRs
// is exactly zero, where the hard-decision shortcut and the serial schedule
// can part ways. Does not produce a path metric.
DecodeOutput ssc_decode(const LlrVector& llr, const CodeSpec& spec, OpMode mode,
                        OpStats* stats = nullptr);

// Successive cancellation list decoding with the min-sum or exact path
// metric. Keeps at most `list_size` paths; pruning sorts the 2L candidates
// stably by (metric, path id, bit).
class SclDecoder {
  public:
    SclDecoder(CodeSpec spec, std::size_t list_size, OpMode mode);
    ~SclDecoder();
    SclDecoder(SclDecoder&&) noexcept;
    SclDecoder& operator=(SclDecoder&&) noexcept;

    // Lowest-metric path.
    DecodeOutput decode(const LlrVector& llr);
    // Lowest-metric CRC-passing path; falls back to the lowest-metric path
    // with crc_ok=false when none passes.
    DecodeOutput decode_crc_aided(const LlrVector& llr);

    struct Finalist {
        BitVector u_hat;
        double metric;
    };
    // Final list of the last decode, sorted by (metric, path id).
    const std::vector<Finalist>& finalists() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

DecodeOutput scl_decode(const LlrVector& llr, const CodeSpec& spec,
                        std::size_t list_size, OpMode mode);
DecodeOutput ca_scl_decode(const LlrVector& llr, const CodeSpec& spec,
                           std::size_t list_size, OpMode mode);

struct ScsStats {
    std::uint64_t extensions = 0;
    std::size_t peak_stack = 0;
};

// Stack decoding: an ordered stack of at most `stack_size` variable-length
// paths, top = lowest metric (ties by insertion sequence). Terminates when
// the top path reaches length N.
DecodeOutput scs_decode(const LlrVector& llr, const CodeSpec& spec,
                        std::size_t stack_size, OpMode mode,
                        ScsStats* stats = nullptr);

// Belief propagation over the (n+1)-plane factor graph: one full
// right-to-left then left-to-right sweep per iteration, frozen left-edge
// priors pinned at +/-B by frozen value. Exact box-plus by default.
DecodeOutput bp_decode(const LlrVector& llr, const CodeSpec& spec,
                       unsigned max_iterations, OpMode mode = OpMode::Exact);

// BP message formulas under the SC traversal schedule; right-going messages
// persist across iterations, left-edge priors as in BP.
DecodeOutput scan_decode(const LlrVector& llr, const CodeSpec& spec,
                         unsigned iterations, OpMode mode = OpMode::MinSum);

// Exhaustive oracle: scores every info word by the exact (or min-sum) path
// metric of its forced decoding path and returns the minimizer; ties go to
// the numerically smallest info word. Guarded to k <= 20.
DecodeOutput ml_bruteforce(const LlrVector& llr, const CodeSpec& spec,
                           OpMode mode = OpMode::Exact);

}  // namespace polar
