#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polar/channel.hpp"
#include "polar/construction.hpp"
#include "polar/core.hpp"
#include "polar/decoders.hpp"

namespace polar {

enum class DecoderKind { Sc, Ssc, Scl, CaScl, Scs, Bp, Scan };

std::string decoder_token(DecoderKind k);
DecoderKind decoder_from_token(const std::string& token);

struct DecoderConfig {
    DecoderKind kind = DecoderKind::Sc;
    std::size_t list_size = 8;    // SCL / CA-SCL
    std::size_t stack_size = 128; // SCS
    unsigned iterations = 30;     // BP / SCAN
    OpMode mode = OpMode::MinSum; // BP defaults to exact via config parsing
    std::string describe() const;
};

struct CodeRecipe {
    enum class Method { Bec, Gade, McAwgn, McBsc, McBec, SpecFile, SeqFile };
    Method method = Method::Gade;
    std::size_t n = 0;
    std::size_t k = 0;          // external payload length
    double design = 0.0;        // Eb/N0 dB (gade, mc-awgn); epsilon / p otherwise
    bool design_is_sigma2 = false;
    std::optional<CrcPoly> crc; // CRC bits carved from the constituent code
    std::uint64_t mc_rounds = 100000;
    std::uint64_t mc_seed = 1;
    std::string path;           // spec-file / seq-file methods
};

// Builds the CodeSpec. With a CRC of degree r the constituent code carries
// k + r unfrozen bits so the external rate stays k/N.
CodeSpec build_code(const CodeRecipe& recipe);

struct StopRule {
    std::uint64_t min_block_errors = 100;
    std::uint64_t max_blocks = 10000000;
};

struct SimConfig {
    CodeRecipe code;
    ChannelKind channel = ChannelKind::AwgnQpsk;
    std::vector<double> grid;  // Eb/N0 dB for AWGN kinds; epsilon / p otherwise
    DecoderConfig decoder;
    StopRule stop;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0 = hardware concurrency
    bool timing = true;    // off zeroes the seconds column for golden runs
};

struct ResultRecord {
    double param_db = 0.0;
    std::uint64_t blocks = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t block_errors = 0;
    double ber = 0.0;
    double bler = 0.0;
    double seconds = 0.0;
    std::uint64_t seed = 0;
    std::string decoder;
};

// Monte-Carlo sweep: per grid point, random payloads through
// encode/transmit/demodulate/decode until the stop rule fires. Blocks are
// simulated in fixed-size chunks with per-(point, block) derived seeds, so
// the emitted records are identical for any worker count.
std::vector<ResultRecord> run_sweep(const SimConfig& cfg);

// Header: param_db,blocks,bit_errors,block_errors,ber,bler,seconds,seed,decoder
std::string emit_csv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_csv(const std::string& text);

// Key-value config text; grammar documented in the README.
SimConfig parse_sim_config(std::istream& is);

}  // namespace polar
