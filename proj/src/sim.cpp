#include "polar/sim.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polar/rng.hpp"

namespace polar {

std::string decoder_token(DecoderKind k) {
    switch (k) {
        case DecoderKind::Sc: return "sc";
        case DecoderKind::Ssc: return "ssc";
        case DecoderKind::Scl: return "scl";
        case DecoderKind::CaScl: return "ca-scl";
        case DecoderKind::Scs: return "scs";
        case DecoderKind::Bp: return "bp";
        case DecoderKind::Scan: return "scan";
    }
    return "?";
}

DecoderKind decoder_from_token(const std::string& token) {
    if (token == "sc") return DecoderKind::Sc;
    if (token == "ssc") return DecoderKind::Ssc;
    if (token == "scl") return DecoderKind::Scl;
    if (token == "ca-scl") return DecoderKind::CaScl;
    if (token == "scs") return DecoderKind::Scs;
    if (token == "bp") return DecoderKind::Bp;
    if (token == "scan") return DecoderKind::Scan;
    throw std::invalid_argument("unknown decoder '" + token + "'");
}

std::string DecoderConfig::describe() const {
    std::ostringstream os;
    os << decoder_token(kind);
    switch (kind) {
        case DecoderKind::Scl:
        case DecoderKind::CaScl: os << "(L=" << list_size; break;
        case DecoderKind::Scs: os << "(D=" << stack_size; break;
        case DecoderKind::Bp:
        case DecoderKind::Scan: os << "(I=" << iterations; break;
        default: os << "(";
    }
    os << (mode == OpMode::Exact ? ";exact)" : ";minsum)");
    return os.str();
}

CodeSpec build_code(const CodeRecipe& recipe) {
    using Method = CodeRecipe::Method;
    if (recipe.method == Method::SpecFile) {
        std::ifstream in(recipe.path);
        if (!in) throw std::invalid_argument("cannot open code spec '" + recipe.path + "'");
        return read_code_spec(in);
    }
    std::size_t r = recipe.crc ? static_cast<std::size_t>(recipe.crc->degree()) : 0;
    std::size_t unfrozen = recipe.k + r;
    if (recipe.n == 0 || unfrozen > recipe.n)
        throw std::invalid_argument("build_code: k + crc bits exceed N");
    double rate = static_cast<double>(recipe.k) / static_cast<double>(recipe.n);

    std::vector<std::size_t> frozen;
    switch (recipe.method) {
        case Method::Bec:
            frozen = select_frozen(bec_capacity_profile(recipe.n, recipe.design), unfrozen);
            break;
        case Method::Gade: {
            double s2 = recipe.design_is_sigma2 ? recipe.design
                                                : sigma2_from_ebn0_db(recipe.design, rate);
            frozen = select_frozen(gade_profile(recipe.n, s2), unfrozen);
            break;
        }
        case Method::McAwgn: {
            double s2 = recipe.design_is_sigma2 ? recipe.design
                                                : sigma2_from_ebn0_db(recipe.design, rate);
            frozen = select_frozen(
                monte_carlo_profile(recipe.n, {ChannelKind::AwgnBpsk, s2},
                                    recipe.mc_rounds, recipe.mc_seed),
                unfrozen);
            break;
        }
        case Method::McBsc:
            frozen = select_frozen(
                monte_carlo_profile(recipe.n, {ChannelKind::Bsc, recipe.design},
                                    recipe.mc_rounds, recipe.mc_seed),
                unfrozen);
            break;
        case Method::McBec:
            frozen = select_frozen(
                monte_carlo_profile(recipe.n, {ChannelKind::Bec, recipe.design},
                                    recipe.mc_rounds, recipe.mc_seed),
                unfrozen);
            break;
        case Method::SeqFile: {
            std::ifstream in(recipe.path);
            if (!in) throw std::invalid_argument("cannot open sequence '" + recipe.path + "'");
            SequenceFile seq = read_sequence(in);
            if (seq.n_bits != recipe.n)
                throw std::invalid_argument("sequence length does not match code.n");
            frozen = frozen_from_sequence(seq, unfrozen);
            break;
        }
        case Method::SpecFile: break;  // handled above
    }
    return make_code_spec(recipe.n, frozen, recipe.crc);
}

namespace {

struct BlockOutcome {
    std::uint64_t bit_errors = 0;
    bool block_error = false;
};

// One worker decodes a strided share of a chunk; decoder state is
// per-worker, RNG streams are per-block.
class PointRunner {
  public:
    PointRunner(const SimConfig& cfg, const CodeSpec& spec, const ChannelModel& ch)
        : cfg_(cfg), spec_(spec), ch_(ch) {}

    BlockOutcome run_block(std::uint64_t seed, SclDecoder* scl) const {
        Rng rng(seed);
        std::size_t payload_len = spec_.payload_length();
        BitVector payload(payload_len);
        for (auto& b : payload) b = rng.bit();
        BitVector code = encode(payload, spec_);
        std::vector<double> obs = transmit(code, ch_, rng);
        LlrVector llr = demodulate_llr(obs, ch_);

        DecodeOutput out;
        const DecoderConfig& d = cfg_.decoder;
        switch (d.kind) {
            case DecoderKind::Sc: out = sc_decode(llr, spec_, d.mode); break;
            case DecoderKind::Ssc: out = ssc_decode(llr, spec_, d.mode); break;
            case DecoderKind::Scl: out = scl->decode(llr); break;
            case DecoderKind::CaScl: out = scl->decode_crc_aided(llr); break;
            case DecoderKind::Scs: out = scs_decode(llr, spec_, d.stack_size, d.mode); break;
            case DecoderKind::Bp: out = bp_decode(llr, spec_, d.iterations, d.mode); break;
            case DecoderKind::Scan: out = scan_decode(llr, spec_, d.iterations, d.mode); break;
        }
        BlockOutcome r;
        for (std::size_t i = 0; i < payload_len; ++i)
            if (out.info_bits[i] != payload[i]) ++r.bit_errors;
        r.block_error = r.bit_errors > 0;
        return r;
    }

  private:
    const SimConfig& cfg_;
    const CodeSpec& spec_;
    const ChannelModel& ch_;
};

constexpr std::uint64_t kChunkBlocks = 256;

}  // namespace

std::vector<ResultRecord> run_sweep(const SimConfig& cfg) {
    if (cfg.grid.empty()) throw std::invalid_argument("run_sweep: empty grid");
    if (cfg.stop.min_block_errors < 1)
        throw std::invalid_argument("run_sweep: min block errors must be >= 1");
    CodeSpec spec = build_code(cfg.code);
    unsigned workers = cfg.workers ? cfg.workers
                                   : std::max(1u, std::thread::hardware_concurrency());
    bool ca = cfg.decoder.kind == DecoderKind::CaScl;
    if (ca && !spec.crc)
        throw std::invalid_argument("run_sweep: ca-scl needs a CRC-bearing code");
    double rate = static_cast<double>(spec.payload_length()) /
                  static_cast<double>(spec.n_bits);

    std::vector<ResultRecord> records;
    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        ChannelModel ch;
        ch.kind = cfg.channel;
        if (ch.kind == ChannelKind::AwgnBpsk || ch.kind == ChannelKind::AwgnQpsk)
            ch.param = sigma2_from_ebn0_db(cfg.grid[gi], rate);
        else
            ch.param = cfg.grid[gi];
        ch.validate();

        PointRunner runner(cfg, spec, ch);
        auto t0 = std::chrono::steady_clock::now();
        std::uint64_t blocks = 0, bit_errors = 0, block_errors = 0;

        bool needs_list = cfg.decoder.kind == DecoderKind::Scl || ca;
        std::vector<std::unique_ptr<SclDecoder>> scls(workers);
        if (needs_list)
            for (auto& ptr : scls)
                ptr = std::make_unique<SclDecoder>(spec, cfg.decoder.list_size,
                                                   cfg.decoder.mode);

        while (blocks < cfg.stop.max_blocks &&
               block_errors < cfg.stop.min_block_errors) {
            std::uint64_t chunk =
                std::min<std::uint64_t>(kChunkBlocks, cfg.stop.max_blocks - blocks);
            std::vector<std::uint64_t> t_bits(workers, 0), t_blocks(workers, 0);
            auto work = [&](unsigned w) {
                for (std::uint64_t b = w; b < chunk; b += workers) {
                    std::uint64_t seed = derive_seed(cfg.seed, gi, blocks + b);
                    BlockOutcome oc = runner.run_block(seed, scls[w].get());
                    t_bits[w] += oc.bit_errors;
                    t_blocks[w] += oc.block_error ? 1 : 0;
                }
            };
            if (workers == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
                for (auto& t : pool) t.join();
            }
            for (unsigned w = 0; w < workers; ++w) {
                bit_errors += t_bits[w];
                block_errors += t_blocks[w];
            }
            blocks += chunk;
        }

        auto t1 = std::chrono::steady_clock::now();
        ResultRecord rec;
        rec.param_db = cfg.grid[gi];
        rec.blocks = blocks;
        rec.bit_errors = bit_errors;
        rec.block_errors = block_errors;
        rec.ber = static_cast<double>(bit_errors) /
                  (static_cast<double>(blocks) * static_cast<double>(spec.payload_length()));
        rec.bler = static_cast<double>(block_errors) / static_cast<double>(blocks);
        rec.seconds = cfg.timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
        rec.seed = cfg.seed;
        rec.decoder = cfg.decoder.describe();
        if (rec.block_errors < 100)
            std::cerr << "warning: point " << rec.param_db << " stopped with only "
                      << rec.block_errors << " block errors; interval estimates are weak\n";
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

void append_double(std::string& s, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, res.ptr);
}

double parse_double(const std::string& tok) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{}) throw std::invalid_argument("csv: bad number '" + tok + "'");
    return v;
}

}  // namespace

std::string emit_csv(const std::vector<ResultRecord>& records) {
    std::string out = "param_db,blocks,bit_errors,block_errors,ber,bler,seconds,seed,decoder\n";
    for (const ResultRecord& r : records) {
        append_double(out, r.param_db);
        out += ',';
        out += std::to_string(r.blocks);
        out += ',';
        out += std::to_string(r.bit_errors);
        out += ',';
        out += std::to_string(r.block_errors);
        out += ',';
        append_double(out, r.ber);
        out += ',';
        append_double(out, r.bler);
        out += ',';
        append_double(out, r.seconds);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += r.decoder;
        out += '\n';
    }
    return out;
}

std::vector<ResultRecord> parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) ||
        line != "param_db,blocks,bit_errors,block_errors,ber,bler,seconds,seed,decoder")
        throw std::invalid_argument("csv: bad header");
    std::vector<ResultRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> tok;
        std::size_t pos = 0;
        while (tok.size() < 8) {
            std::size_t c = line.find(',', pos);
            if (c == std::string::npos)
                throw std::invalid_argument("csv: short row");
            tok.push_back(line.substr(pos, c - pos));
            pos = c + 1;
        }
        tok.push_back(line.substr(pos));
        ResultRecord r;
        r.param_db = parse_double(tok[0]);
        r.blocks = std::stoull(tok[1]);
        r.bit_errors = std::stoull(tok[2]);
        r.block_errors = std::stoull(tok[3]);
        r.ber = parse_double(tok[4]);
        r.bler = parse_double(tok[5]);
        r.seconds = parse_double(tok[6]);
        r.seed = std::stoull(tok[7]);
        r.decoder = tok[8];
        out.push_back(std::move(r));
    }
    return out;
}

SimConfig parse_sim_config(std::istream& is) {
    SimConfig cfg;
    bool saw_decoder_mode = false;
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        auto need = [&](auto& v) {
            if (!(ls >> v)) throw std::invalid_argument("config: missing value for " + key);
        };
        if (key == "code.method") {
            std::string m;
            need(m);
            using Method = CodeRecipe::Method;
            if (m == "bec") cfg.code.method = Method::Bec;
            else if (m == "gade") cfg.code.method = Method::Gade;
            else if (m == "mc-awgn") cfg.code.method = Method::McAwgn;
            else if (m == "mc-bsc") cfg.code.method = Method::McBsc;
            else if (m == "mc-bec") cfg.code.method = Method::McBec;
            else if (m == "spec-file") cfg.code.method = Method::SpecFile;
            else if (m == "seq-file") cfg.code.method = Method::SeqFile;
            else throw std::invalid_argument("config: unknown code.method '" + m + "'");
        } else if (key == "code.n") need(cfg.code.n);
        else if (key == "code.k") need(cfg.code.k);
        else if (key == "code.design") need(cfg.code.design);
        else if (key == "code.design_sigma2") {
            need(cfg.code.design);
            cfg.code.design_is_sigma2 = true;
        } else if (key == "code.crc_poly") {
            std::string hex;
            need(hex);
            cfg.code.crc = crc_poly_from_hex(hex);
        } else if (key == "code.mc_rounds") need(cfg.code.mc_rounds);
        else if (key == "code.mc_seed") need(cfg.code.mc_seed);
        else if (key == "code.file") need(cfg.code.path);
        else if (key == "channel") {
            std::string c;
            need(c);
            cfg.channel = channel_from_token(c);
        } else if (key == "grid") {
            cfg.grid.clear();
            double v;
            while (ls >> v) cfg.grid.push_back(v);
        } else if (key == "decoder") {
            std::string d;
            need(d);
            cfg.decoder.kind = decoder_from_token(d);
            if (cfg.decoder.kind == DecoderKind::Bp && !saw_decoder_mode)
                cfg.decoder.mode = OpMode::Exact;
        } else if (key == "decoder.list") need(cfg.decoder.list_size);
        else if (key == "decoder.stack") need(cfg.decoder.stack_size);
        else if (key == "decoder.iters") need(cfg.decoder.iterations);
        else if (key == "decoder.mode") {
            std::string m;
            need(m);
            saw_decoder_mode = true;
            if (m == "exact") cfg.decoder.mode = OpMode::Exact;
            else if (m == "minsum") cfg.decoder.mode = OpMode::MinSum;
            else throw std::invalid_argument("config: unknown decoder.mode '" + m + "'");
        } else if (key == "stop.block_errors") need(cfg.stop.min_block_errors);
        else if (key == "stop.max_blocks") need(cfg.stop.max_blocks);
        else if (key == "seed") need(cfg.seed);
        else if (key == "workers") need(cfg.workers);
        else if (key == "timing") {
            std::string t;
            need(t);
            if (t == "on") cfg.timing = true;
            else if (t == "off") cfg.timing = false;
            else throw std::invalid_argument("config: timing must be on/off");
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

}  // namespace polar
