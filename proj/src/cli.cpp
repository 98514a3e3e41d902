#include "polar/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "polar/construction.hpp"
#include "polar/quantum.hpp"
#include "polar/sim.hpp"

namespace polar {

namespace {

std::string slurp(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << text;
}

BitVector parse_bits(const std::string& text) {
    BitVector bits;
    std::istringstream is(text);
    int b;
    while (is >> b) {
        if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0/1");
        bits.push_back(static_cast<Bit>(b));
    }
    return bits;
}

CodeSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open code spec '" + path + "'");
    return read_code_spec(in);
}

struct ConstructOpts {
    std::string method = "gade";
    std::size_t n = 0;
    double design_ebn0 = 0.0;
    double design_sigma2 = 0.0;
    double epsilon = 0.5;
    double p = 0.1;
    double rate = 0.5;
    std::uint64_t mc_rounds = 100000;
    std::uint64_t mc_seed = 1;
    std::size_t k = 0;
    std::string crc_poly;
    std::string out;
    bool have_sigma2 = false;
};

void add_construct(CLI::App& app) {
    auto* cmd = app.add_subcommand("construct",
                                   "emit a reliability sequence or a code spec");
    auto opt = std::make_shared<ConstructOpts>();
    cmd->add_option("--method", opt->method,
                    "bec | bec-z | gade | mc-awgn | mc-bsc | mc-bec");
    cmd->add_option("--n", opt->n, "block length (power of two)")->required();
    cmd->add_option("--design-ebn0", opt->design_ebn0, "design Eb/N0 in dB");
    cmd->add_option("--design-sigma2", opt->design_sigma2, "design noise variance")
        ->each([opt](const std::string&) { opt->have_sigma2 = true; });
    cmd->add_option("--epsilon", opt->epsilon, "BEC erasure probability");
    cmd->add_option("--p", opt->p, "BSC cross-over probability");
    cmd->add_option("--rate", opt->rate, "rate used for the Eb/N0 conversion");
    cmd->add_option("--mc-rounds", opt->mc_rounds, "Monte-Carlo rounds");
    cmd->add_option("--mc-seed", opt->mc_seed, "Monte-Carlo seed");
    cmd->add_option("--k", opt->k, "emit a code spec with this payload length");
    cmd->add_option("--crc-poly", opt->crc_poly, "CRC polynomial (hex), spec output only");
    cmd->add_option("--out", opt->out, "output file (default stdout)");

    cmd->callback([opt]() {
        double s2 = opt->have_sigma2 ? opt->design_sigma2
                                     : sigma2_from_ebn0_db(opt->design_ebn0, opt->rate);
        ReliabilityProfile prof;
        if (opt->method == "bec") prof = bec_capacity_profile(opt->n, opt->epsilon);
        else if (opt->method == "bec-z") prof = bec_bhattacharyya_profile(opt->n, opt->epsilon);
        else if (opt->method == "gade") prof = gade_profile(opt->n, s2);
        else if (opt->method == "mc-awgn")
            prof = monte_carlo_profile(opt->n, {ChannelKind::AwgnBpsk, s2},
                                       opt->mc_rounds, opt->mc_seed);
        else if (opt->method == "mc-bsc")
            prof = monte_carlo_profile(opt->n, {ChannelKind::Bsc, opt->p},
                                       opt->mc_rounds, opt->mc_seed);
        else if (opt->method == "mc-bec")
            prof = monte_carlo_profile(opt->n, {ChannelKind::Bec, opt->epsilon},
                                       opt->mc_rounds, opt->mc_seed);
        else throw CLI::ValidationError("--method", "unknown method " + opt->method);

        std::ostringstream os;
        if (opt->k > 0) {
            std::optional<CrcPoly> crc;
            if (!opt->crc_poly.empty()) crc = crc_poly_from_hex(opt->crc_poly);
            std::size_t r = crc ? static_cast<std::size_t>(crc->degree()) : 0;
            CodeSpec spec = make_code_spec(opt->n, select_frozen(prof, opt->k + r), crc);
            write_code_spec(os, spec);
        } else {
            write_sequence(os, sequence_from_profile(prof));
        }
        write_out(opt->out, os.str());
    });
}

struct EncodeOpts {
    std::string spec, in, out;
};

void add_encode(CLI::App& app) {
    auto* cmd = app.add_subcommand("encode", "encode one block of payload bits");
    auto opt = std::make_shared<EncodeOpts>();
    cmd->add_option("--spec", opt->spec, "code spec file")->required();
    cmd->add_option("--in", opt->in, "payload bits file (default stdin)");
    cmd->add_option("--out", opt->out, "output file (default stdout)");
    cmd->callback([opt]() {
        CodeSpec spec = load_spec(opt->spec);
        BitVector payload = parse_bits(slurp(opt->in));
        BitVector code = encode(payload, spec);
        std::ostringstream os;
        for (std::size_t i = 0; i < code.size(); ++i)
            os << int(code[i]) << (i + 1 == code.size() ? "\n" : " ");
        write_out(opt->out, os.str());
    });
}

struct DecodeOpts {
    std::string spec, in, out;
    std::string decoder = "sc";
    std::string mode;
    std::size_t list = 8, stack = 128;
    unsigned iters = 30;
};

void add_decode(CLI::App& app) {
    auto* cmd = app.add_subcommand("decode", "decode one block of channel LLRs");
    auto opt = std::make_shared<DecodeOpts>();
    cmd->add_option("--spec", opt->spec, "code spec file")->required();
    cmd->add_option("--in", opt->in, "LLR file, one value per bit (default stdin)");
    cmd->add_option("--out", opt->out, "output file (default stdout)");
    cmd->add_option("--decoder", opt->decoder, "sc|ssc|scl|ca-scl|scs|bp|scan|ml");
    cmd->add_option("--mode", opt->mode, "exact|minsum");
    cmd->add_option("--list", opt->list, "SCL list size");
    cmd->add_option("--stack", opt->stack, "SCS stack size");
    cmd->add_option("--iters", opt->iters, "BP/SCAN iterations");
    cmd->callback([opt]() {
        CodeSpec spec = load_spec(opt->spec);
        LlrVector llr;
        std::istringstream is(slurp(opt->in));
        double v;
        while (is >> v) llr.values.push_back(saturate(v));
        OpMode mode;
        if (opt->mode == "exact") mode = OpMode::Exact;
        else if (opt->mode == "minsum") mode = OpMode::MinSum;
        else mode = (opt->decoder == "bp" || opt->decoder == "ml") ? OpMode::Exact
                                                                   : OpMode::MinSum;
        DecodeOutput out;
        if (opt->decoder == "sc") out = sc_decode(llr, spec, mode);
        else if (opt->decoder == "ssc") out = ssc_decode(llr, spec, mode);
        else if (opt->decoder == "scl") out = scl_decode(llr, spec, opt->list, mode);
        else if (opt->decoder == "ca-scl") out = ca_scl_decode(llr, spec, opt->list, mode);
        else if (opt->decoder == "scs") out = scs_decode(llr, spec, opt->stack, mode);
        else if (opt->decoder == "bp") out = bp_decode(llr, spec, opt->iters, mode);
        else if (opt->decoder == "scan") out = scan_decode(llr, spec, opt->iters, mode);
        else if (opt->decoder == "ml") out = ml_bruteforce(llr, spec, mode);
        else throw CLI::ValidationError("--decoder", "unknown decoder " + opt->decoder);

        std::ostringstream os;
        os << "info";
        for (Bit b : out.info_bits) os << ' ' << int(b);
        os << "\nmetric " << out.metric << "\n";
        if (out.crc_ok) os << "crc_ok " << (*out.crc_ok ? 1 : 0) << "\n";
        write_out(opt->out, os.str());
    });
}

struct SimulateOpts {
    std::string config, out;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    bool have_seed = false, have_workers = false;
};

void apply_env_overrides(SimConfig& cfg) {
    if (const char* w = std::getenv("POLARLAB_WORKERS"))
        cfg.workers = static_cast<unsigned>(std::stoul(w));
    if (const char* s = std::getenv("POLARLAB_SEED")) cfg.seed = std::stoull(s);
}

void add_simulate(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "run a BLER/BER sweep from a config file");
    auto opt = std::make_shared<SimulateOpts>();
    cmd->add_option("--config", opt->config, "sweep config file")->required();
    cmd->add_option("--out", opt->out, "output CSV (default stdout)");
    cmd->add_option("--seed", opt->seed, "override the config seed")
        ->each([opt](const std::string&) { opt->have_seed = true; });
    cmd->add_option("--workers", opt->workers, "override the worker count")
        ->each([opt](const std::string&) { opt->have_workers = true; });
    cmd->callback([opt]() {
        std::ifstream in(opt->config);
        if (!in) throw std::invalid_argument("cannot open config '" + opt->config + "'");
        SimConfig cfg = parse_sim_config(in);
        apply_env_overrides(cfg);
        if (opt->have_seed) cfg.seed = opt->seed;
        if (opt->have_workers) cfg.workers = opt->workers;
        write_out(opt->out, emit_csv(run_sweep(cfg)));
    });
}

struct QsimOpts {
    std::size_t n = 64;
    std::vector<double> p_grid;
    std::size_t k = 0, c = 0;
    double threshold = -1.0;
    std::uint64_t blocks = 1000;
    std::uint64_t seed = 1;
    std::uint64_t mc_rounds = 100000;
    std::uint64_t mc_seed = 1;
    unsigned workers = 0;
    std::string out, spec_out;
};

void add_qsim(CLI::App& app) {
    auto* cmd = app.add_subcommand("qsim", "quantum logical-error-rate sweep");
    auto opt = std::make_shared<QsimOpts>();
    cmd->add_option("--n", opt->n, "qubit count (power of two)");
    cmd->add_option("--p", opt->p_grid, "depolarizing probability grid")->required();
    cmd->add_option("--k", opt->k, "target information qubits (with --c)");
    cmd->add_option("--c", opt->c, "target ebit count (with --k)");
    cmd->add_option("--threshold", opt->threshold, "BER threshold classification");
    cmd->add_option("--blocks", opt->blocks, "blocks per grid point");
    cmd->add_option("--seed", opt->seed, "simulation seed");
    cmd->add_option("--mc-rounds", opt->mc_rounds, "construction Monte-Carlo rounds");
    cmd->add_option("--mc-seed", opt->mc_seed, "construction Monte-Carlo seed");
    cmd->add_option("--workers", opt->workers, "worker count (0 = auto)");
    cmd->add_option("--out", opt->out, "output CSV (default stdout)");
    cmd->add_option("--spec-out", opt->spec_out, "also write the last classification");
    cmd->callback([opt]() {
        if (const char* w = std::getenv("POLARLAB_WORKERS"))
            opt->workers = static_cast<unsigned>(std::stoul(w));
        if (const char* s = std::getenv("POLARLAB_SEED")) opt->seed = std::stoull(s);
        std::string csv = "p,blocks,logical_errors,rate,ci_low,ci_high,c,seed\n";
        QuantumCodeSpec last;
        for (double p : opt->p_grid) {
            ClassifyRule rule = opt->threshold >= 0.0
                                    ? ClassifyRule{ClassifyThreshold{opt->threshold}}
                                    : ClassifyRule{ClassifyTarget{opt->k, opt->c}};
            QuantumCodeSpec spec = classify_channels(opt->n, p, rule, opt->mc_rounds,
                                                     opt->mc_seed, opt->workers);
            LogicalErrorRecord rec = simulate_logical_error_rate(
                spec, p, opt->blocks, opt->seed, opt->workers);
            std::ostringstream row;
            row << rec.p << ',' << rec.blocks << ',' << rec.logical_errors << ','
                << rec.rate << ',' << rec.ci_low << ',' << rec.ci_high << ','
                << rec.ebits << ',' << rec.seed << '\n';
            csv += row.str();
            last = spec;
        }
        write_out(opt->out, csv);
        if (!opt->spec_out.empty()) {
            std::ostringstream os;
            write_quantum_spec(os, last);
            write_out(opt->spec_out, os.str());
        }
    });
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
    CLI::App app{"polarlab: polar-coding laboratory"};
    app.require_subcommand(1);
    add_construct(app);
    add_encode(app);
    add_decode(app);
    add_simulate(app);
    add_qsim(app);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace polar
