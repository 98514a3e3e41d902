#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polar/cli.hpp"
#include "polar/sim.hpp"

using namespace polar;

namespace {

std::string data_path(const std::string& name) {
    return std::string(POLARLAB_TEST_DATA_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

SimConfig quick_config() {
    SimConfig cfg;
    cfg.code.method = CodeRecipe::Method::Bec;
    cfg.code.n = 64;
    cfg.code.k = 32;
    cfg.code.design = 0.3;
    cfg.channel = ChannelKind::Bec;
    cfg.grid = {0.2};
    cfg.decoder.kind = DecoderKind::Sc;
    cfg.stop.min_block_errors = 30;
    cfg.stop.max_blocks = 2000;
    cfg.seed = 77;
    cfg.workers = 1;
    cfg.timing = false;
    return cfg;
}

}  // namespace

TEST_CASE("decoder tokens and descriptors") {
    for (DecoderKind k : {DecoderKind::Sc, DecoderKind::Ssc, DecoderKind::Scl,
                          DecoderKind::CaScl, DecoderKind::Scs, DecoderKind::Bp,
                          DecoderKind::Scan})
        CHECK(decoder_from_token(decoder_token(k)) == k);
    CHECK_THROWS_AS(decoder_from_token("viterbi"), std::invalid_argument);

    DecoderConfig d;
    d.kind = DecoderKind::Scl;
    d.list_size = 8;
    d.mode = OpMode::MinSum;
    CHECK(d.describe() == "scl(L=8;minsum)");
}

TEST_CASE("build_code honours the crc bit budget") {
    CodeRecipe r;
    r.method = CodeRecipe::Method::Gade;
    r.n = 128;
    r.k = 48;
    r.design = 1.0;
    CodeSpec plain = build_code(r);
    CHECK(plain.k_info == 48);
    CHECK(plain.payload_length() == 48);

    r.crc = default_crc11();
    CodeSpec ca = build_code(r);
    CHECK(ca.k_info == 59);  // constituent code carries k + r bits
    CHECK(ca.payload_length() == 48);

    r.k = 126;
    CHECK_THROWS_AS(build_code(r), std::invalid_argument);
}

TEST_CASE("csv round-trips exactly") {
    std::vector<ResultRecord> recs;
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        ResultRecord r;
        r.param_db = (rng.uniform() - 0.5) * 12.0;
        r.blocks = rng.next_u64() % 1000000 + 1;
        r.bit_errors = rng.next_u64() % 100000;
        r.block_errors = rng.next_u64() % 1000;
        r.ber = rng.uniform() * 0.2;
        r.bler = rng.uniform();
        r.seconds = rng.uniform() * 100.0;
        r.seed = rng.next_u64();
        r.decoder = "scl(L=8;minsum)";
        recs.push_back(std::move(r));
    }
    std::vector<ResultRecord> back = parse_csv(emit_csv(recs));
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].param_db == recs[i].param_db);
        CHECK(back[i].blocks == recs[i].blocks);
        CHECK(back[i].bit_errors == recs[i].bit_errors);
        CHECK(back[i].block_errors == recs[i].block_errors);
        CHECK(back[i].ber == recs[i].ber);
        CHECK(back[i].bler == recs[i].bler);
        CHECK(back[i].seconds == recs[i].seconds);
        CHECK(back[i].seed == recs[i].seed);
        CHECK(back[i].decoder == recs[i].decoder);
    }

    CHECK(emit_csv({}) ==
          "param_db,blocks,bit_errors,block_errors,ber,bler,seconds,seed,decoder\n");
    CHECK_THROWS_AS(parse_csv("bogus\n"), std::invalid_argument);
}

TEST_CASE("config parsing") {
    std::istringstream is(
        "# sweep config\n"
        "code.method gade\n"
        "code.n 1024\n"
        "code.k 512\n"
        "code.design 2.0\n"
        "code.crc_poly 0xE21\n"
        "channel awgn-qpsk\n"
        "grid 1.0 1.5 2.0\n"
        "decoder ca-scl\n"
        "decoder.list 8\n"
        "decoder.mode minsum\n"
        "stop.block_errors 100\n"
        "stop.max_blocks 1000000\n"
        "seed 42\n"
        "workers 4\n"
        "timing off\n");
    SimConfig cfg = parse_sim_config(is);
    CHECK(cfg.code.n == 1024);
    CHECK(cfg.code.k == 512);
    REQUIRE(cfg.code.crc.has_value());
    CHECK(cfg.code.crc->degree() == 11);
    CHECK(cfg.channel == ChannelKind::AwgnQpsk);
    CHECK(cfg.grid == std::vector<double>{1.0, 1.5, 2.0});
    CHECK(cfg.decoder.kind == DecoderKind::CaScl);
    CHECK(cfg.decoder.list_size == 8);
    CHECK(cfg.seed == 42);
    CHECK(cfg.workers == 4);
    CHECK_FALSE(cfg.timing);

    std::istringstream bad("code.method gade\nwhat 1\n");
    CHECK_THROWS_AS(parse_sim_config(bad), std::invalid_argument);

    // bp defaults to the exact box-plus unless overridden
    std::istringstream bp_cfg("decoder bp\n");
    CHECK(parse_sim_config(bp_cfg).decoder.mode == OpMode::Exact);
    std::istringstream bp_cfg2("decoder bp\ndecoder.mode minsum\n");
    CHECK(parse_sim_config(bp_cfg2).decoder.mode == OpMode::MinSum);
}

TEST_CASE("zero-noise point runs to the block cap with no errors") {
    SimConfig cfg = quick_config();
    cfg.grid = {0.0};
    cfg.stop.max_blocks = 300;
    std::vector<ResultRecord> recs = run_sweep(cfg);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].blocks == 300);
    CHECK(recs[0].block_errors == 0);
    CHECK(recs[0].bler == 0.0);
    CHECK(recs[0].seconds == 0.0);
}

TEST_CASE("stopping rule: enough errors or the cap") {
    SimConfig cfg = quick_config();
    cfg.grid = {0.05, 0.45};
    cfg.stop.min_block_errors = 25;
    cfg.stop.max_blocks = 600;
    for (const ResultRecord& r : run_sweep(cfg)) {
        bool ok = r.block_errors >= 25 || r.blocks == 600;
        CHECK(ok);
        CHECK(r.bler == doctest::Approx(double(r.block_errors) / r.blocks));
    }
}

TEST_CASE("sc and ssc sweeps emit identical records") {
    SimConfig cfg = quick_config();
    cfg.grid = {0.25, 0.4};
    std::vector<ResultRecord> sc = run_sweep(cfg);
    cfg.decoder.kind = DecoderKind::Ssc;
    std::vector<ResultRecord> ssc = run_sweep(cfg);
    REQUIRE(sc.size() == ssc.size());
    for (std::size_t i = 0; i < sc.size(); ++i) {
        CHECK(sc[i].blocks == ssc[i].blocks);
        CHECK(sc[i].bit_errors == ssc[i].bit_errors);
        CHECK(sc[i].block_errors == ssc[i].block_errors);
    }
}

TEST_CASE("records are identical for any worker count") {
    SimConfig cfg = quick_config();
    cfg.channel = ChannelKind::Bec;
    cfg.grid = {0.3, 0.45};
    cfg.decoder.kind = DecoderKind::Scl;
    cfg.decoder.list_size = 4;
    std::string csv1, csv4, csv8;
    cfg.workers = 1;
    csv1 = emit_csv(run_sweep(cfg));
    cfg.workers = 4;
    csv4 = emit_csv(run_sweep(cfg));
    cfg.workers = 8;
    csv8 = emit_csv(run_sweep(cfg));
    CHECK(csv1 == csv4);
    CHECK(csv1 == csv8);
}

TEST_CASE("cli: golden sweep reproduces byte-for-byte") {
    std::string out = tmp_path("polarlab_golden_out.csv");
    int rc = cli_dispatch(
        {"simulate", "--config", data_path("golden_sweep.cfg"), "--out", out});
    REQUIRE(rc == 0);
    CHECK(read_file(out) == read_file(data_path("golden_sweep.csv")));
}

TEST_CASE("cli: construct emits a valid sequence and code spec") {
    std::string seq_out = tmp_path("polarlab_seq.txt");
    int rc = cli_dispatch({"construct", "--method", "gade", "--n", "256",
                           "--design-ebn0", "2.0", "--out", seq_out});
    REQUIRE(rc == 0);
    std::ifstream in(seq_out);
    SequenceFile seq = read_sequence(in);
    CHECK(seq.n_bits == 256);

    std::string spec_out = tmp_path("polarlab_spec.txt");
    rc = cli_dispatch({"construct", "--method", "bec", "--n", "16", "--epsilon", "0.5",
                       "--k", "8", "--out", spec_out});
    REQUIRE(rc == 0);
    std::ifstream sin(spec_out);
    CodeSpec spec = read_code_spec(sin);
    CHECK(spec.n_bits == 16);
    CHECK(spec.k_info == 8);
}

TEST_CASE("cli: encode and decode round-trip through files") {
    std::string spec_out = tmp_path("polarlab_spec8.txt");
    REQUIRE(cli_dispatch({"construct", "--method", "bec", "--n", "8", "--epsilon", "0.5",
                          "--k", "4", "--out", spec_out}) == 0);
    std::string bits_in = tmp_path("polarlab_bits.txt");
    {
        std::ofstream f(bits_in);
        f << "1 0 0 1\n";
    }
    std::string code_out = tmp_path("polarlab_code.txt");
    REQUIRE(cli_dispatch({"encode", "--spec", spec_out, "--in", bits_in, "--out",
                          code_out}) == 0);
    CHECK(read_file(code_out) == "0 0 0 0 1 1 1 1\n");

    // noiseless LLRs from the codeword
    std::string llr_in = tmp_path("polarlab_llr.txt");
    {
        std::ofstream f(llr_in);
        std::istringstream cs(read_file(code_out));
        int b;
        while (cs >> b) f << (b ? -12.0 : 12.0) << "\n";
    }
    std::string dec_out = tmp_path("polarlab_dec.txt");
    REQUIRE(cli_dispatch({"decode", "--spec", spec_out, "--decoder", "scl", "--list",
                          "4", "--in", llr_in, "--out", dec_out}) == 0);
    std::string text = read_file(dec_out);
    CHECK(text.find("info 1 0 0 1") != std::string::npos);
}

TEST_CASE("cli: bad usage returns nonzero") {
    CHECK(cli_dispatch({"simulate", "--no-such-flag"}) != 0);
    CHECK(cli_dispatch({"frobnicate"}) != 0);
    CHECK(cli_dispatch({}) != 0);
    CHECK(cli_dispatch({"decode", "--spec", "/no/such/file"}) != 0);
}

TEST_CASE("cli: environment overrides seed and workers") {
    std::string out = tmp_path("polarlab_env_out.csv");
    setenv("POLARLAB_SEED", "31337", 1);
    int rc = cli_dispatch(
        {"simulate", "--config", data_path("golden_sweep.cfg"), "--out", out});
    unsetenv("POLARLAB_SEED");
    REQUIRE(rc == 0);
    std::vector<ResultRecord> recs = parse_csv(read_file(out));
    REQUIRE(!recs.empty());
    CHECK(recs[0].seed == 31337);
}
