#include <algorithm>
#include <bit>
#include <memory>
#include <stdexcept>

#include "polar/decoders.hpp"

namespace polar {

namespace {

// Iterative SC state owned by one stack entry: LLR planes P[1..n]
// (depth 0 is the shared channel vector) and partial-sum planes CL/CR.
struct Layout {
    std::size_t N;
    int n;
    std::vector<std::size_t> offP;   // P[d], d in [1, n], width N >> d
    std::vector<std::size_t> offCL;  // CL[d], d in [0, n-1], width N >> (d+1)
    std::vector<std::size_t> offCR;
    std::size_t p_total = 0, c_total = 0;

    explicit Layout(std::size_t n_bits) : N(n_bits), n(log2_exact(n_bits)) {
        offP.assign(n + 1, 0);
        for (int d = 1; d <= n; ++d) {
            offP[d] = p_total;
            p_total += N >> d;
        }
        offCL.assign(n, 0);
        offCR.assign(n, 0);
        for (int d = 0; d < n; ++d) {
            offCL[d] = c_total;
            c_total += N >> (d + 1);
        }
        for (int d = 0; d < n; ++d) {
            offCR[d] = c_total;
            c_total += N >> (d + 1);
        }
    }
};

struct Entry {
    std::vector<double> planes;  // Layout::p_total
    std::vector<Bit> sums;       // Layout::c_total
    BitVector u;                 // prefix [0, len)
    std::size_t len = 0;
    double metric = 0.0;
    std::uint64_t seq = 0;
};

struct Engine {
    const Layout& lay;
    const double* chan;
    OpMode mode;

    double* P(Entry& e, int d) const { return e.planes.data() + lay.offP[d]; }
    const double* Pc(const Entry& e, int d) const {
        return d == 0 ? chan : e.planes.data() + lay.offP[d];
    }
    Bit* CL(Entry& e, int d) const { return e.sums.data() + lay.offCL[d]; }
    Bit* CR(Entry& e, int d) const { return e.sums.data() + lay.offCR[d]; }

    // Decision LLR for leaf `phi`, updating the entry's planes.
    double calc_llr(Entry& e, std::size_t phi) const {
        int d_start = 0;
        if (phi != 0) {
            int dg = lay.n - 1 - std::countr_zero(phi);
            std::size_t h = lay.N >> (dg + 1);
            const double* src = Pc(e, dg);
            const Bit* bl = CL(e, dg);
            double* dst = P(e, dg + 1);
            for (std::size_t i = 0; i < h; ++i) dst[i] = g_op(src[i], src[i + h], bl[i]);
            d_start = dg + 1;
        }
        for (int d = d_start; d < lay.n; ++d) {
            std::size_t h = lay.N >> (d + 1);
            const double* src = Pc(e, d);
            double* dst = P(e, d + 1);
            for (std::size_t i = 0; i < h; ++i) dst[i] = f_op(src[i], src[i + h], mode);
        }
        return P(e, lay.n)[0];
    }

    void push_bit(Entry& e, std::size_t phi, Bit bit) const {
        e.u[phi] = bit;
        ++e.len;
        int d = lay.n - 1;
        std::size_t cur = phi;
        ((cur & 1) ? CR(e, d) : CL(e, d))[0] = bit;
        while ((cur & 1) && d > 0) {
            std::size_t half = lay.N >> (d + 1);
            const Bit* bl = CL(e, d);
            const Bit* br = CR(e, d);
            Bit* dst = ((cur >> 1) & 1) ? CR(e, d - 1) : CL(e, d - 1);
            for (std::size_t i = 0; i < half; ++i) {
                dst[i] = bl[i] ^ br[i];
                dst[i + half] = br[i];
            }
            cur >>= 1;
            --d;
        }
    }
};

}  // namespace

DecodeOutput scs_decode(const LlrVector& llr, const CodeSpec& spec,
                        std::size_t stack_size, OpMode mode, ScsStats* stats) {
    spec.validate();
    if (stack_size < 2) throw std::invalid_argument("scs: stack size must be >= 2");
    if (llr.values.size() != spec.n_bits)
        throw std::invalid_argument("scs: LLR length does not match N");

    Layout lay(spec.n_bits);
    Engine eng{lay, llr.values.data(), mode};
    std::vector<bool> frozen = spec.frozen_mask();
    BitVector fval(spec.n_bits, 0);
    for (std::size_t i = 0; i < spec.frozen_set.size(); ++i)
        fval[spec.frozen_set[i]] = spec.frozen_values[i];

    // sorted descending by (metric, seq): the best path lives at the back
    std::vector<std::unique_ptr<Entry>> stack;
    auto worse = [](const std::unique_ptr<Entry>& a, const std::unique_ptr<Entry>& b) {
        if (a->metric != b->metric) return a->metric > b->metric;
        return a->seq > b->seq;
    };
    auto push = [&](std::unique_ptr<Entry> e) {
        auto it = std::upper_bound(stack.begin(), stack.end(), e, worse);
        stack.insert(it, std::move(e));
    };

    std::uint64_t seq_counter = 0;
    {
        auto root = std::make_unique<Entry>();
        root->planes.resize(lay.p_total);
        root->sums.resize(lay.c_total);
        root->u.assign(spec.n_bits, 0);
        root->seq = seq_counter++;
        stack.push_back(std::move(root));
    }

    ScsStats local;
    while (true) {
        Entry& top = *stack.back();
        if (top.len == spec.n_bits) break;

        std::unique_ptr<Entry> cur = std::move(stack.back());
        stack.pop_back();
        ++local.extensions;

        std::size_t phi = cur->len;
        double dec = eng.calc_llr(*cur, phi);
        if (frozen[phi]) {
            cur->metric = path_metric_update(cur->metric, dec, fval[phi], mode);
            eng.push_bit(*cur, phi, fval[phi]);
            cur->seq = seq_counter++;
            push(std::move(cur));
        } else {
            if (stack.size() == stack_size - 1) stack.erase(stack.begin());
            auto sibling = std::make_unique<Entry>(*cur);
            cur->metric = path_metric_update(cur->metric, dec, 0, mode);
            eng.push_bit(*cur, phi, 0);
            cur->seq = seq_counter++;
            sibling->metric = path_metric_update(sibling->metric, dec, 1, mode);
            eng.push_bit(*sibling, phi, 1);
            sibling->seq = seq_counter++;
            push(std::move(cur));
            push(std::move(sibling));
        }
        local.peak_stack = std::max(local.peak_stack, stack.size());
    }

    Entry& win = *stack.back();
    if (stats) *stats = local;
    return assemble_output(std::move(win.u), spec, win.metric);
}

}  // namespace polar
