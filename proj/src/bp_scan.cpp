#include <stdexcept>

#include "polar/decoders.hpp"

namespace polar {

namespace {

// Planes are indexed 0..n: plane 0 is the left (u) edge, plane n the
// channel edge. The kernel between planes v-1 and v pairs position i with
// i + 2^{v-1} inside blocks of size 2^v.
struct Graph {
    std::size_t N;
    int n;
    std::vector<double> L, R;  // (n+1) x N, plane-major

    explicit Graph(std::size_t n_bits) : N(n_bits), n(log2_exact(n_bits)) {
        L.assign((n + 1) * N, 0.0);
        R.assign((n + 1) * N, 0.0);
    }
    double* Lp(int v) { return L.data() + static_cast<std::size_t>(v) * N; }
    double* Rp(int v) { return R.data() + static_cast<std::size_t>(v) * N; }
};

void pin_priors(Graph& g, const CodeSpec& spec, double bound) {
    double* r0 = g.Rp(0);
    for (std::size_t i = 0; i < spec.n_bits; ++i) r0[i] = 0.0;
    for (std::size_t i = 0; i < spec.frozen_set.size(); ++i)
        r0[spec.frozen_set[i]] = spec.frozen_values[i] ? -bound : bound;
}

BitVector harden(const Graph& g, const CodeSpec& spec) {
    BitVector u(spec.n_bits, 0);
    std::vector<bool> frozen = spec.frozen_mask();
    BitVector fval(spec.n_bits, 0);
    for (std::size_t i = 0; i < spec.frozen_set.size(); ++i)
        fval[spec.frozen_set[i]] = spec.frozen_values[i];
    const double* left = g.L.data();  // plane 0
    for (std::size_t i = 0; i < spec.n_bits; ++i)
        u[i] = frozen[i] ? fval[i] : hard_bit(left[i]);
    return u;
}

LlrVector soft_from(const Graph& g, double bound) {
    LlrVector s;
    s.saturation = bound;
    s.values.assign(g.L.begin(), g.L.begin() + g.N);
    return s;
}

}  // namespace

DecodeOutput bp_decode(const LlrVector& llr, const CodeSpec& spec,
                       unsigned max_iterations, OpMode mode) {
    spec.validate();
    if (llr.values.size() != spec.n_bits)
        throw std::invalid_argument("bp: LLR length does not match N");
    if (max_iterations < 1) throw std::invalid_argument("bp: need at least one iteration");

    double B = llr.saturation;
    Graph g(spec.n_bits);
    pin_priors(g, spec, B);
    for (std::size_t i = 0; i < spec.n_bits; ++i) g.Lp(g.n)[i] = llr.values[i];

    for (unsigned t = 0; t < max_iterations; ++t) {
        for (int v = g.n; v >= 1; --v) {  // right-to-left
            std::size_t h = std::size_t{1} << (v - 1);
            const double* lin = g.Lp(v);
            double* lout = g.Lp(v - 1);
            const double* rin = g.Rp(v - 1);
            for (std::size_t base = 0; base < g.N; base += 2 * h)
                for (std::size_t i = base; i < base + h; ++i) {
                    lout[i] = f_op(lin[i], saturate(lin[i + h] + rin[i + h], B), mode);
                    lout[i + h] = saturate(lin[i + h] + f_op(lin[i], rin[i], mode), B);
                }
        }
        for (int v = 1; v <= g.n; ++v) {  // left-to-right
            std::size_t h = std::size_t{1} << (v - 1);
            const double* lin = g.Lp(v);
            double* rout = g.Rp(v);
            const double* rin = g.Rp(v - 1);
            for (std::size_t base = 0; base < g.N; base += 2 * h)
                for (std::size_t i = base; i < base + h; ++i) {
                    rout[i] = f_op(rin[i], saturate(lin[i + h] + rin[i + h], B), mode);
                    rout[i + h] = saturate(rin[i + h] + f_op(rin[i], lin[i], mode), B);
                }
        }
    }

    DecodeOutput out = assemble_output(harden(g, spec), spec, 0.0);
    out.soft_out = soft_from(g, B);
    return out;
}

namespace {

struct ScanContext {
    Graph g;
    double B;
    OpMode mode;

    ScanContext(std::size_t n, double bound, OpMode m) : g(n), B(bound), mode(m) {}

    // Depth-first pass: inputs live on plane v spanning [base, base+m).
    // Right-going messages from the previous pass feed the f-stage; fresh
    // child messages feed the g-analogue and the upward combine, so soft
    // partial sums flow left-to-right within the pass. Leaf priors are
    // never rewritten, mirroring the BP initialization.
    void node(int v, std::size_t base, std::size_t m) {
        if (m == 1) return;
        std::size_t h = m / 2;
        double* lin = g.Lp(v);
        double* lout = g.Lp(v - 1);
        double* rchild = g.Rp(v - 1);
        for (std::size_t i = base; i < base + h; ++i)
            lout[i] = f_op(lin[i], saturate(lin[i + h] + rchild[i + h], B), mode);
        node(v - 1, base, h);
        for (std::size_t i = base; i < base + h; ++i)
            lout[i + h] = saturate(lin[i + h] + f_op(lin[i], rchild[i], mode), B);
        node(v - 1, base + h, h);
        double* rout = g.Rp(v);
        for (std::size_t i = base; i < base + h; ++i) {
            rout[i] = f_op(rchild[i], saturate(lin[i + h] + rchild[i + h], B), mode);
            rout[i + h] = saturate(rchild[i + h] + f_op(rchild[i], lin[i], mode), B);
        }
    }
};

}  // namespace

DecodeOutput scan_decode(const LlrVector& llr, const CodeSpec& spec,
                         unsigned iterations, OpMode mode) {
    spec.validate();
    if (llr.values.size() != spec.n_bits)
        throw std::invalid_argument("scan: LLR length does not match N");
    if (iterations < 1) throw std::invalid_argument("scan: need at least one iteration");

    ScanContext c(spec.n_bits, llr.saturation, mode);
    pin_priors(c.g, spec, c.B);
    for (std::size_t i = 0; i < spec.n_bits; ++i) c.g.Lp(c.g.n)[i] = llr.values[i];
    for (unsigned t = 0; t < iterations; ++t) c.node(c.g.n, 0, spec.n_bits);

    DecodeOutput out = assemble_output(harden(c.g, spec), spec, 0.0);
    out.soft_out = soft_from(c.g, c.B);
    return out;
}

}  // namespace polar
