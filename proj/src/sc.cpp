#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polar/decoders.hpp"

namespace polar {

namespace {

// Frozen value by position (0 at information positions).
BitVector frozen_value_by_pos(const CodeSpec& spec) {
    BitVector fval(spec.n_bits, 0);
    for (std::size_t i = 0; i < spec.frozen_set.size(); ++i)
        fval[spec.frozen_set[i]] = spec.frozen_values[i];
    return fval;
}

// Shared buffers for the depth-first recursion. L[d] holds the active
// node's input LLRs at depth d; BL/BR[d] receive the child partial sums.
struct Workspace {
    std::size_t n_bits;
    int depth;
    std::vector<std::vector<double>> L;
    std::vector<std::vector<Bit>> BL, BR;
    OpMode mode;
    OpStats* stats;

    Workspace(std::size_t n, OpMode m, OpStats* s) : n_bits(n), mode(m), stats(s) {
        depth = log2_exact(n);
        L.resize(depth + 1);
        BL.resize(depth + 1);
        BR.resize(depth + 1);
        for (int d = 0; d <= depth; ++d) {
            L[d].resize(n >> d);
            BL[d].resize(n >> d);
            BR[d].resize(n >> d);
        }
    }
};

// Policy-driven SC recursion. Policy::decide(pos, llr) returns the leaf bit.
template <typename Policy>
void sc_rec(Workspace& w, Policy& pol, int d, std::size_t base, Bit* beta) {
    std::size_t m = w.n_bits >> d;
    if (m == 1) {
        beta[0] = pol.decide(base, w.L[d][0]);
        return;
    }
    std::size_t h = m / 2;
    const std::vector<double>& in = w.L[d];
    std::vector<double>& child = w.L[d + 1];
    for (std::size_t i = 0; i < h; ++i) child[i] = f_op(in[i], in[i + h], w.mode);
    if (w.stats) w.stats->f_ops += h;
    Bit* bl = w.BL[d + 1].data();
    sc_rec(w, pol, d + 1, base, bl);
    for (std::size_t i = 0; i < h; ++i) child[i] = g_op(in[i], in[i + h], bl[i]);
    if (w.stats) w.stats->g_ops += h;
    Bit* br = w.BR[d + 1].data();
    sc_rec(w, pol, d + 1, base + h, br);
    for (std::size_t i = 0; i < h; ++i) {
        beta[i] = bl[i] ^ br[i];
        beta[i + h] = br[i];
    }
}

struct ScPolicy {
    const std::vector<bool>& frozen;
    const BitVector& fval;
    BitVector& u;
    double metric = 0.0;
    OpMode mode;

    Bit decide(std::size_t pos, double llr) {
        Bit b = frozen[pos] ? fval[pos] : hard_bit(llr);
        metric = path_metric_update(metric, llr, b, mode);
        u[pos] = b;
        return b;
    }
};

struct ForcedPolicy {
    const BitVector& forced;
    double metric = 0.0;
    OpMode mode;

    Bit decide(std::size_t pos, double llr) {
        Bit b = forced[pos];
        metric = path_metric_update(metric, llr, b, mode);
        return b;
    }
};

void check_llr(const LlrVector& llr, const CodeSpec& spec) {
    spec.validate();
    if (llr.values.size() != spec.n_bits)
        throw std::invalid_argument("decode: LLR length does not match N");
}

}  // namespace

DecodeOutput assemble_output(BitVector u_hat, const CodeSpec& spec, double metric) {
    DecodeOutput out;
    out.codeword_hat = polar_transform(u_hat);
    out.metric = metric;
    BitVector unfrozen;
    unfrozen.reserve(spec.k_info);
    std::vector<bool> frozen = spec.frozen_mask();
    for (std::size_t i = 0; i < spec.n_bits; ++i)
        if (!frozen[i]) unfrozen.push_back(u_hat[i]);
    if (spec.crc) {
        out.crc_ok = crc_check(unfrozen, *spec.crc);
        unfrozen.resize(spec.payload_length());
    }
    out.info_bits = std::move(unfrozen);
    out.u_hat = std::move(u_hat);
    return out;
}

DecodeOutput sc_decode(const LlrVector& llr, const CodeSpec& spec, OpMode mode,
                       OpStats* stats) {
    check_llr(llr, spec);
    Workspace w(spec.n_bits, mode, stats);
    w.L[0] = llr.values;
    std::vector<bool> frozen = spec.frozen_mask();
    BitVector fval = frozen_value_by_pos(spec);
    BitVector u(spec.n_bits, 0);
    ScPolicy pol{frozen, fval, u, 0.0, mode};
    sc_rec(w, pol, 0, 0, w.BL[0].data());
    return assemble_output(std::move(u), spec, pol.metric);
}

namespace {

struct SscContext {
    Workspace w;
    std::vector<bool> frozen;
    BitVector fval;
    std::vector<std::size_t> frozen_prefix;  // frozen count in [0, i)
    BitVector u;

    SscContext(const CodeSpec& spec, OpMode mode, OpStats* stats)
        : w(spec.n_bits, mode, stats),
          frozen(spec.frozen_mask()),
          fval(frozen_value_by_pos(spec)),
          frozen_prefix(spec.n_bits + 1, 0),
          u(spec.n_bits, 0) {
        for (std::size_t i = 0; i < spec.n_bits; ++i)
            frozen_prefix[i + 1] = frozen_prefix[i] + (frozen[i] ? 1 : 0);
    }

    std::size_t frozen_count(std::size_t base, std::size_t m) const {
        return frozen_prefix[base + m] - frozen_prefix[base];
    }
};

// In-span butterfly; used for Rate-0/Rate-1 shortcuts (not counted as f/g).
void span_transform(Bit* x, std::size_t m) {
    for (std::size_t inc = 1; inc < m; inc <<= 1)
        for (std::size_t i = 0; i < m; i += 2 * inc)
            for (std::size_t j = 0; j < inc; ++j) x[i + j] ^= x[i + j + inc];
}

void ssc_rec(SscContext& c, int d, std::size_t base, Bit* beta) {
    std::size_t m = c.w.n_bits >> d;
    std::size_t nf = c.frozen_count(base, m);
    if (nf == m) {  // Rate-0: leaves take frozen values, no f/g needed
        for (std::size_t i = 0; i < m; ++i) {
            c.u[base + i] = c.fval[base + i];
            beta[i] = c.fval[base + i];
        }
        span_transform(beta, m);
        return;
    }
    const std::vector<double>& in = c.w.L[d];
    if (nf == 0 && m > 1) {  // Rate-1: hard-decide inputs unless a tie lurks
        bool tie = std::any_of(in.begin(), in.begin() + m,
                               [](double v) { return v == 0.0; });
        if (!tie) {
            for (std::size_t i = 0; i < m; ++i) beta[i] = hard_bit(in[i]);
            BitVector x(beta, beta + m);
            span_transform(x.data(), m);  // involution: u = x G
            for (std::size_t i = 0; i < m; ++i) c.u[base + i] = x[i];
            return;
        }
    }
    if (m == 1) {
        Bit b = c.frozen[base] ? c.fval[base] : hard_bit(in[0]);
        c.u[base] = b;
        beta[0] = b;
        return;
    }
    std::size_t h = m / 2;
    std::vector<double>& child = c.w.L[d + 1];
    for (std::size_t i = 0; i < h; ++i) child[i] = f_op(in[i], in[i + h], c.w.mode);
    if (c.w.stats) c.w.stats->f_ops += h;
    Bit* bl = c.w.BL[d + 1].data();
    ssc_rec(c, d + 1, base, bl);
    for (std::size_t i = 0; i < h; ++i) child[i] = g_op(in[i], in[i + h], bl[i]);
    if (c.w.stats) c.w.stats->g_ops += h;
    Bit* br = c.w.BR[d + 1].data();
    ssc_rec(c, d + 1, base + h, br);
    for (std::size_t i = 0; i < h; ++i) {
        beta[i] = bl[i] ^ br[i];
        beta[i + h] = br[i];
    }
}

}  // namespace

DecodeOutput ssc_decode(const LlrVector& llr, const CodeSpec& spec, OpMode mode,
                        OpStats* stats) {
    check_llr(llr, spec);
    SscContext c(spec, mode, stats);
    c.w.L[0] = llr.values;
    ssc_rec(c, 0, 0, c.w.BL[0].data());
    return assemble_output(std::move(c.u), spec, 0.0);
}

DecodeOutput ml_bruteforce(const LlrVector& llr, const CodeSpec& spec, OpMode mode) {
    check_llr(llr, spec);
    std::size_t k = spec.k_info;
    if (k > 20) throw std::invalid_argument("ml_bruteforce: k > 20");
    std::vector<std::size_t> info_pos = spec.info_set();
    BitVector fval = frozen_value_by_pos(spec);

    Workspace w(spec.n_bits, mode, nullptr);
    BitVector u(spec.n_bits, 0);
    double best_metric = 0.0;
    BitVector best_u;
    std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t word = 0; word < total; ++word) {
        u = fval;
        // first info position carries the most significant bit of `word`
        for (std::size_t j = 0; j < k; ++j)
            u[info_pos[j]] = static_cast<Bit>((word >> (k - 1 - j)) & 1);
        w.L[0] = llr.values;
        ForcedPolicy pol{u, 0.0, mode};
        sc_rec(w, pol, 0, 0, w.BL[0].data());
        if (word == 0 || pol.metric < best_metric) {
            best_metric = pol.metric;
            best_u = u;
        }
    }
    return assemble_output(std::move(best_u), spec, best_metric);
}

}  // namespace polar
