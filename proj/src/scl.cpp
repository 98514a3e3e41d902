#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>

#include "polar/decoders.hpp"

namespace polar {

namespace {

// Copy-on-write array pool: at most one live slot per path, so `slots`
// never needs to exceed the list size.
template <typename T>
struct Pool {
    std::size_t width = 0;
    std::vector<T> store;
    std::vector<int> refcnt;
    std::vector<int> free_slots;

    void configure(std::size_t slots, std::size_t w) {
        width = w;
        store.resize(slots * w);
        refcnt.assign(slots, 0);
        free_slots.reserve(slots);
    }
    void reset() {
        std::fill(refcnt.begin(), refcnt.end(), 0);
        free_slots.clear();
        for (int s = static_cast<int>(refcnt.size()) - 1; s >= 0; --s)
            free_slots.push_back(s);
    }
    int alloc() {
        int s = free_slots.back();
        free_slots.pop_back();
        refcnt[s] = 1;
        return s;
    }
    void retain(int s) { ++refcnt[s]; }
    void release(int s) {
        if (--refcnt[s] == 0) free_slots.push_back(s);
    }
    int make_private(int s) {
        if (refcnt[s] == 1) return s;
        --refcnt[s];
        int t = alloc();
        std::copy(store.begin() + s * width, store.begin() + (s + 1) * width,
                  store.begin() + t * width);
        return t;
    }
    T* data(int s) { return store.data() + s * width; }
    const T* cdata(int s) const { return store.data() + s * width; }
};

struct TrailNode {
    std::int32_t parent;
    Bit bit;
};

}  // namespace

struct SclDecoder::Impl {
    CodeSpec spec;
    std::size_t N;
    int n;
    std::size_t L;
    OpMode mode;
    std::vector<bool> frozen;
    BitVector fval;  // frozen value by position

    // P[d] for d in [1, n]; depth 0 reads the channel LLRs directly.
    std::vector<Pool<double>> P;
    // CL/CR[d] for d in [0, n-1]; width N >> (d+1).
    std::vector<Pool<Bit>> CL, CR;

    std::vector<std::vector<int>> slotP, slotCL, slotCR;  // [d][path]
    std::vector<bool> active;
    std::vector<double> metric;
    std::vector<std::int32_t> trail_head;
    std::vector<TrailNode> trail;
    std::vector<int> free_paths;

    const double* chan = nullptr;

    std::vector<Finalist> finalists;

    struct Cand {
        double m;
        int path;
        Bit bit;
    };
    std::vector<Cand> cands;

    Impl(CodeSpec s, std::size_t list_size, OpMode md)
        : spec(std::move(s)), L(list_size), mode(md) {
        spec.validate();
        if (L < 1) throw std::invalid_argument("scl: list size must be >= 1");
        N = spec.n_bits;
        n = log2_exact(N);
        frozen = spec.frozen_mask();
        fval.assign(N, 0);
        for (std::size_t i = 0; i < spec.frozen_set.size(); ++i)
            fval[spec.frozen_set[i]] = spec.frozen_values[i];

        P.resize(n + 1);
        for (int d = 1; d <= n; ++d) P[d].configure(L, N >> d);
        CL.resize(n);
        CR.resize(n);
        for (int d = 0; d < n; ++d) {
            CL[d].configure(L, N >> (d + 1));
            CR[d].configure(L, N >> (d + 1));
        }
        slotP.assign(n + 1, std::vector<int>(L, -1));
        slotCL.assign(n, std::vector<int>(L, -1));
        slotCR.assign(n, std::vector<int>(L, -1));
        active.assign(L, false);
        metric.assign(L, 0.0);
        trail_head.assign(L, -1);
    }

    void reset() {
        for (int d = 1; d <= n; ++d) P[d].reset();
        for (int d = 0; d < n; ++d) {
            CL[d].reset();
            CR[d].reset();
        }
        std::fill(active.begin(), active.end(), false);
        std::fill(metric.begin(), metric.end(), 0.0);
        std::fill(trail_head.begin(), trail_head.end(), -1);
        trail.clear();
        free_paths.clear();
        for (int p = static_cast<int>(L) - 1; p >= 1; --p) free_paths.push_back(p);
        active[0] = true;
        for (int d = 1; d <= n; ++d) slotP[d][0] = P[d].alloc();
        for (int d = 0; d < n; ++d) {
            slotCL[d][0] = CL[d].alloc();
            slotCR[d][0] = CR[d].alloc();
        }
    }

    void kill_path(int p) {
        active[p] = false;
        for (int d = 1; d <= n; ++d) P[d].release(slotP[d][p]);
        for (int d = 0; d < n; ++d) {
            CL[d].release(slotCL[d][p]);
            CR[d].release(slotCR[d][p]);
        }
        free_paths.push_back(p);
    }

    int clone_path(int src) {
        int p = free_paths.back();
        free_paths.pop_back();
        active[p] = true;
        metric[p] = metric[src];
        trail_head[p] = trail_head[src];
        for (int d = 1; d <= n; ++d) {
            slotP[d][p] = slotP[d][src];
            P[d].retain(slotP[d][p]);
        }
        for (int d = 0; d < n; ++d) {
            slotCL[d][p] = slotCL[d][src];
            CL[d].retain(slotCL[d][p]);
            slotCR[d][p] = slotCR[d][src];
            CR[d].retain(slotCR[d][p]);
        }
        return p;
    }

    const double* levelP(int d, int p) const {
        return d == 0 ? chan : P[d].cdata(slotP[d][p]);
    }

    // f/g chain producing the decision LLR P[n][0] for leaf `phi`.
    void calc_llrs(std::size_t phi) {
        int d_start;
        if (phi == 0) {
            d_start = 0;
        } else {
            int t = std::countr_zero(phi);
            int dg = n - 1 - t;
            std::size_t h = N >> (dg + 1);
            for (std::size_t p = 0; p < L; ++p) {
                if (!active[p]) continue;
                const double* src = levelP(dg, p);
                const Bit* bl = CL[dg].cdata(slotCL[dg][p]);
                slotP[dg + 1][p] = P[dg + 1].make_private(slotP[dg + 1][p]);
                double* dst = P[dg + 1].data(slotP[dg + 1][p]);
                for (std::size_t i = 0; i < h; ++i) dst[i] = g_op(src[i], src[i + h], bl[i]);
            }
            d_start = dg + 1;
        }
        for (int d = d_start; d < n; ++d) {
            std::size_t h = N >> (d + 1);
            for (std::size_t p = 0; p < L; ++p) {
                if (!active[p]) continue;
                const double* src = levelP(d, p);
                slotP[d + 1][p] = P[d + 1].make_private(slotP[d + 1][p]);
                double* dst = P[d + 1].data(slotP[d + 1][p]);
                for (std::size_t i = 0; i < h; ++i) dst[i] = f_op(src[i], src[i + h], mode);
            }
        }
    }

    // Record the decided bit and propagate completed partial sums upward.
    void update_bits(std::size_t phi, int p, Bit bit) {
        trail.push_back({trail_head[p], bit});
        trail_head[p] = static_cast<std::int32_t>(trail.size()) - 1;

        int d = n - 1;
        std::size_t cur = phi;
        {
            auto& pool = (cur & 1) ? CR[d] : CL[d];
            auto& slot = (cur & 1) ? slotCR[d][p] : slotCL[d][p];
            slot = pool.make_private(slot);
            pool.data(slot)[0] = bit;
        }
        while ((cur & 1) && d > 0) {
            std::size_t half = N >> (d + 1);
            const Bit* bl = CL[d].cdata(slotCL[d][p]);
            const Bit* br = CR[d].cdata(slotCR[d][p]);
            bool parent_right = (cur >> 1) & 1;
            auto& pool = parent_right ? CR[d - 1] : CL[d - 1];
            auto& slot = parent_right ? slotCR[d - 1][p] : slotCL[d - 1][p];
            slot = pool.make_private(slot);
            Bit* dst = pool.data(slot);
            for (std::size_t i = 0; i < half; ++i) {
                dst[i] = bl[i] ^ br[i];
                dst[i + half] = br[i];
            }
            cur >>= 1;
            --d;
        }
    }

    void run(const LlrVector& llr) {
        if (llr.values.size() != N)
            throw std::invalid_argument("scl: LLR length does not match N");
        chan = llr.values.data();
        reset();
        for (std::size_t phi = 0; phi < N; ++phi) {
            calc_llrs(phi);
            if (frozen[phi]) {
                Bit b = fval[phi];
                for (std::size_t p = 0; p < L; ++p) {
                    if (!active[p]) continue;
                    double dec = P[n].cdata(slotP[n][p])[0];
                    metric[p] = path_metric_update(metric[p], dec, b, mode);
                    update_bits(phi, static_cast<int>(p), b);
                }
                continue;
            }
            cands.clear();
            for (std::size_t p = 0; p < L; ++p) {
                if (!active[p]) continue;
                double dec = P[n].cdata(slotP[n][p])[0];
                cands.push_back({path_metric_update(metric[p], dec, 0, mode),
                                 static_cast<int>(p), 0});
                cands.push_back({path_metric_update(metric[p], dec, 1, mode),
                                 static_cast<int>(p), 1});
            }
            std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                if (a.m != b.m) return a.m < b.m;
                if (a.path != b.path) return a.path < b.path;
                return a.bit < b.bit;
            });
            std::size_t keep = std::min(L, cands.size());

            // fates per parent path
            std::vector<std::pair<bool, bool>> kept(L, {false, false});
            std::vector<std::pair<double, double>> cand_metric(L);
            for (std::size_t c = 0; c < keep; ++c) {
                const Cand& cd = cands[c];
                if (cd.bit == 0) {
                    kept[cd.path].first = true;
                    cand_metric[cd.path].first = cd.m;
                } else {
                    kept[cd.path].second = true;
                    cand_metric[cd.path].second = cd.m;
                }
            }
            for (std::size_t p = 0; p < L; ++p)
                if (active[p] && !kept[p].first && !kept[p].second)
                    kill_path(static_cast<int>(p));
            // clones use the freshly freed ids; ascending parent order keeps
            // the assignment deterministic
            std::vector<std::pair<int, Bit>> decided;
            for (std::size_t p = 0; p < L; ++p) {
                if (!active[p] || (!kept[p].first && !kept[p].second)) continue;
                if (kept[p].first && kept[p].second) {
                    int q = clone_path(static_cast<int>(p));
                    metric[p] = cand_metric[p].first;
                    metric[q] = cand_metric[p].second;
                    decided.push_back({static_cast<int>(p), 0});
                    decided.push_back({q, 1});
                } else {
                    Bit b = kept[p].first ? 0 : 1;
                    metric[p] = b ? cand_metric[p].second : cand_metric[p].first;
                    decided.push_back({static_cast<int>(p), b});
                }
            }
            for (auto [p, b] : decided) update_bits(phi, p, b);
        }

        // final list sorted by (metric, path id)
        std::vector<std::pair<double, int>> order;
        for (std::size_t p = 0; p < L; ++p)
            if (active[p]) order.push_back({metric[p], static_cast<int>(p)});
        std::stable_sort(order.begin(), order.end());
        finalists.clear();
        for (auto& [m, p] : order) {
            Finalist fin;
            fin.metric = m;
            fin.u_hat.assign(N, 0);
            std::int32_t node = trail_head[p];
            for (std::size_t i = N; i-- > 0;) {
                fin.u_hat[i] = trail[node].bit;
                node = trail[node].parent;
            }
            finalists.push_back(std::move(fin));
        }
    }
};

SclDecoder::SclDecoder(CodeSpec spec, std::size_t list_size, OpMode mode)
    : impl_(std::make_unique<Impl>(std::move(spec), list_size, mode)) {}
SclDecoder::~SclDecoder() = default;
SclDecoder::SclDecoder(SclDecoder&&) noexcept = default;
SclDecoder& SclDecoder::operator=(SclDecoder&&) noexcept = default;

DecodeOutput SclDecoder::decode(const LlrVector& llr) {
    impl_->run(llr);
    const Finalist& best = impl_->finalists.front();
    return assemble_output(best.u_hat, impl_->spec, best.metric);
}

DecodeOutput SclDecoder::decode_crc_aided(const LlrVector& llr) {
    if (!impl_->spec.crc)
        throw std::invalid_argument("ca-scl: code spec carries no CRC");
    impl_->run(llr);
    const CodeSpec& spec = impl_->spec;
    std::vector<bool> frozen_mask = spec.frozen_mask();
    for (const Finalist& fin : impl_->finalists) {
        BitVector unfrozen;
        unfrozen.reserve(spec.k_info);
        for (std::size_t i = 0; i < spec.n_bits; ++i)
            if (!frozen_mask[i]) unfrozen.push_back(fin.u_hat[i]);
        if (crc_check(unfrozen, *spec.crc))
            return assemble_output(fin.u_hat, spec, fin.metric);
    }
    // report the best path rather than erasing the block
    const Finalist& best = impl_->finalists.front();
    return assemble_output(best.u_hat, spec, best.metric);
}

const std::vector<SclDecoder::Finalist>& SclDecoder::finalists() const {
    return impl_->finalists;
}

DecodeOutput scl_decode(const LlrVector& llr, const CodeSpec& spec,
                        std::size_t list_size, OpMode mode) {
    SclDecoder dec(spec, list_size, mode);
    return dec.decode(llr);
}

DecodeOutput ca_scl_decode(const LlrVector& llr, const CodeSpec& spec,
                           std::size_t list_size, OpMode mode) {
    SclDecoder dec(spec, list_size, mode);
    return dec.decode_crc_aided(llr);
}

}  // namespace polar
