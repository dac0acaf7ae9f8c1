#ifndef QSS_STATEVECTOR_HPP
#define QSS_STATEVECTOR_HPP

// Dense statevector backend.  Universal but tiny: p^m amplitudes with a hard
// cap of 2^24.  Wire w holds digit (index / p^w) % p.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qss/circuit.hpp"
#include "qss/errors.hpp"
#include "qss/pauli.hpp"
#include "qss/rng.hpp"

namespace qss {

using cplx = std::complex<double>;

constexpr double kAmpTol = 1e-9;

struct MeasurementRecord {
    std::uint32_t wire = 0;
    Fe outcome = 0;
    std::uint64_t round = 0;
};

class StateVector {
  public:
    StateVector() = default;

    StateVector(std::uint32_t p, std::uint32_t m) : p_(p), m_(m) {
        std::uint64_t dim = 1;
        for (std::uint32_t i = 0; i < m; ++i) {
            dim *= p;
            if (dim > (1ull << 24)) throw Error("statevector would exceed 2^24 amplitudes");
        }
        amps_.assign(dim, cplx(0, 0));
        amps_[0] = 1.0;
    }

    static StateVector basis_state(std::uint32_t p, const FeVec& digits) {
        StateVector s(p, std::uint32_t(digits.size()));
        std::uint64_t idx = 0, stride = 1;
        for (std::size_t w = 0; w < digits.size(); ++w) {
            idx += stride * digits[w];
            stride *= p;
        }
        s.amps_[0] = 0;
        s.amps_[idx] = 1.0;
        return s;
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t num_qupits() const { return m_; }
    std::uint64_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amps() const { return amps_; }
    std::vector<cplx>& amps() { return amps_; }

    cplx omega(Fe k) const {
        double ang = 2.0 * std::numbers::pi * double(k % p_) / double(p_);
        return {std::cos(ang), std::sin(ang)};
    }

    double norm2() const {
        double s = 0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void normalize() {
        double n = std::sqrt(norm2());
        if (n < kAmpTol) throw Error("attempt to normalize a null vector");
        for (auto& a : amps_) a /= n;
    }

    Fe digit(std::uint64_t idx, std::uint32_t wire) const {
        std::uint64_t stride = 1;
        for (std::uint32_t i = 0; i < wire; ++i) stride *= p_;
        return Fe(idx / stride % p_);
    }

    // basis-state relabeling: idx -> f(idx) must be a bijection
    template <typename F>
    void permute_basis(F&& f) {
        std::vector<cplx> out(amps_.size(), cplx(0, 0));
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            out[f(i)] += amps_[i];
        amps_ = std::move(out);
    }

    std::uint64_t stride_of(std::uint32_t wire) const {
        std::uint64_t s = 1;
        for (std::uint32_t i = 0; i < wire; ++i) s *= p_;
        return s;
    }

    void apply_x(std::uint32_t wire, Fe c) {
        std::uint64_t st = stride_of(wire);
        permute_basis([&](std::uint64_t i) {
            Fe d = Fe(i / st % p_);
            return i + st * ((d + c) % p_) - st * d;
        });
    }

    void apply_z(std::uint32_t wire, Fe c) {
        std::uint64_t st = stride_of(wire);
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            amps_[i] *= omega(Fe(std::uint64_t(c) * (i / st % p_) % p_));
    }

    void apply_mul(std::uint32_t wire, Fe c) {
        if (c % p_ == 0) throw Error("mul factor must be nonzero");
        std::uint64_t st = stride_of(wire);
        permute_basis([&](std::uint64_t i) {
            Fe d = Fe(i / st % p_);
            return i + st * (std::uint64_t(d) * c % p_) - st * d;
        });
    }

    void apply_swap(std::uint32_t w1, std::uint32_t w2) {
        std::uint64_t s1 = stride_of(w1), s2 = stride_of(w2);
        permute_basis([&](std::uint64_t i) {
            Fe d1 = Fe(i / s1 % p_), d2 = Fe(i / s2 % p_);
            return i - s1 * d1 - s2 * d2 + s1 * d2 + s2 * d1;
        });
    }

    void apply_cadd(std::uint32_t src, std::uint32_t dst, Fe b) {
        std::uint64_t ss = stride_of(src), sd = stride_of(dst);
        permute_basis([&](std::uint64_t i) {
            Fe a = Fe(i / ss % p_), t = Fe(i / sd % p_);
            Fe nt = Fe((t + std::uint64_t(b) * a) % p_);
            return i + sd * nt - sd * t;
        });
    }

    void apply_toffoli(std::uint32_t w1, std::uint32_t w2, std::uint32_t w3) {
        std::uint64_t s1 = stride_of(w1), s2 = stride_of(w2), s3 = stride_of(w3);
        permute_basis([&](std::uint64_t i) {
            Fe a = Fe(i / s1 % p_), b = Fe(i / s2 % p_), c = Fe(i / s3 % p_);
            Fe nc = Fe((c + std::uint64_t(a) * b) % p_);
            return i + s3 * nc - s3 * c;
        });
    }

    void apply_fourier(std::uint32_t wire, Fe r, bool inverse) {
        if (r % p_ == 0) throw Error("fourier scale must be nonzero");
        std::uint64_t st = stride_of(wire);
        double root = 1.0 / std::sqrt(double(p_));
        std::vector<cplx> col(p_);
        for (std::uint64_t base = 0; base < amps_.size(); ++base) {
            if (base / st % p_ != 0) continue;
            for (Fe a = 0; a < p_; ++a) col[a] = amps_[base + st * a];
            for (Fe b = 0; b < p_; ++b) {
                cplx acc(0, 0);
                for (Fe a = 0; a < p_; ++a) {
                    Fe e = Fe(std::uint64_t(r) * a % p_ * b % p_);
                    acc += col[a] * (inverse ? std::conj(omega(e)) : omega(e));
                }
                amps_[base + st * b] = acc * root;
            }
        }
    }

    // Born-rule measurement in the computational basis.
    Fe measure(std::uint32_t wire, CounterRng& rng) {
        std::uint64_t st = stride_of(wire);
        std::vector<double> probs(p_, 0.0);
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            probs[i / st % p_] += std::norm(amps_[i]);
        double u = rng.uniform01();
        Fe outcome = p_ - 1;
        double acc = 0;
        for (Fe a = 0; a < p_; ++a) {
            acc += probs[a];
            if (u < acc) {
                outcome = a;
                break;
            }
        }
        collapse(wire, outcome);
        return outcome;
    }

    void collapse(std::uint32_t wire, Fe outcome) {
        std::uint64_t st = stride_of(wire);
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            if (i / st % p_ != outcome) amps_[i] = 0;
        normalize();
    }

    std::vector<double> outcome_probs(std::uint32_t wire) const {
        std::uint64_t st = stride_of(wire);
        std::vector<double> probs(p_, 0.0);
        for (std::uint64_t i = 0; i < amps_.size(); ++i)
            probs[i / st % p_] += std::norm(amps_[i]);
        return probs;
    }

    // exact joint distribution over all basis states
    std::vector<double> full_distribution() const {
        std::vector<double> d(amps_.size());
        for (std::uint64_t i = 0; i < amps_.size(); ++i) d[i] = std::norm(amps_[i]);
        return d;
    }

    void apply_pauli(const PauliOp& e) {
        if (e.n() != m_) throw Error("pauli width mismatch");
        for (std::uint32_t w = 0; w < m_; ++w) {
            if (e.z[w]) apply_z(w, e.z[w]);
            if (e.x[w]) apply_x(w, e.x[w]);
        }
        if (e.phase) {
            cplx ph = omega(e.phase);
            for (auto& a : amps_) a *= ph;
        }
    }

    void apply(const GateOp& g, CounterRng* rng = nullptr,
               std::vector<MeasurementRecord>* records = nullptr) {
        switch (g.kind) {
            case GateKind::XShift: apply_x(g.wires[0], g.param % p_); break;
            case GateKind::ZPhase: apply_z(g.wires[0], g.param % p_); break;
            case GateKind::CAdd: apply_cadd(g.wires[0], g.wires[1], g.param % p_); break;
            case GateKind::Mul: apply_mul(g.wires[0], g.param % p_); break;
            case GateKind::Swap: apply_swap(g.wires[0], g.wires[1]); break;
            case GateKind::Fourier: apply_fourier(g.wires[0], g.param % p_, false); break;
            case GateKind::FourierInv: apply_fourier(g.wires[0], g.param % p_, true); break;
            case GateKind::Toffoli: apply_toffoli(g.wires[0], g.wires[1], g.wires[2]); break;
            case GateKind::Measure: {
                if (!rng) throw Error("measurement needs a randomness source");
                Fe o = measure(g.wires[0], *rng);
                if (records) records->push_back({g.wires[0], o, 0});
                break;
            }
            case GateKind::PrepZero: {
                if (!rng) throw Error("reset needs a randomness source");
                Fe o = measure(g.wires[0], *rng);
                if (o) apply_x(g.wires[0], Fe(p_ - o));
                break;
            }
            case GateKind::PrepPlus: {
                apply({GateKind::PrepZero, 0, {g.wires[0]}}, rng, nullptr);
                apply_fourier(g.wires[0], 1, false);
                break;
            }
            case GateKind::Discard: {
                // measure-and-forget; callers only discard classical wires
                if (!rng) throw Error("discard needs a randomness source");
                measure(g.wires[0], *rng);
                break;
            }
        }
    }

    void run(const Circuit& c, CounterRng& rng,
             std::vector<MeasurementRecord>* records = nullptr) {
        if (c.p != p_ || c.num_qupits != m_) throw Error("circuit does not fit this register");
        for (const auto& g : c.gates) apply(g, &rng, records);
    }

  private:
    std::uint32_t p_ = 0, m_ = 0;
    std::vector<cplx> amps_;
};

inline cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim() || a.p() != b.p()) throw Error("dimension mismatch");
    cplx acc(0, 0);
    for (std::uint64_t i = 0; i < a.dim(); ++i)
        acc += std::conj(a.amps()[i]) * b.amps()[i];
    return acc;
}

inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

// Reduced density matrix on the kept wires, row-major.
inline std::vector<cplx> partial_trace(const StateVector& s,
                                       const std::vector<std::uint32_t>& keep) {
    std::uint64_t kd = 1;
    for (std::size_t i = 0; i < keep.size(); ++i) kd *= s.p();
    if (kd > (1ull << 12)) throw Error("partial trace target too large");

    std::vector<std::uint32_t> drop;
    for (std::uint32_t w = 0; w < s.num_qupits(); ++w) {
        bool kept = false;
        for (auto k : keep) kept |= (k == w);
        if (!kept) drop.push_back(w);
    }
    std::uint64_t dd = 1;
    for (std::size_t i = 0; i < drop.size(); ++i) dd *= s.p();

    auto compose_index = [&](std::uint64_t kidx, std::uint64_t didx) {
        std::uint64_t idx = 0;
        std::uint64_t kk = kidx;
        for (auto w : keep) {
            idx += s.stride_of(w) * (kk % s.p());
            kk /= s.p();
        }
        std::uint64_t ddx = didx;
        for (auto w : drop) {
            idx += s.stride_of(w) * (ddx % s.p());
            ddx /= s.p();
        }
        return idx;
    };

    std::vector<cplx> rho(kd * kd, cplx(0, 0));
    for (std::uint64_t d = 0; d < dd; ++d)
        for (std::uint64_t r = 0; r < kd; ++r) {
            cplx ar = s.amps()[compose_index(r, d)];
            if (std::abs(ar) < 1e-14) continue;
            for (std::uint64_t c = 0; c < kd; ++c)
                rho[r * kd + c] += ar * std::conj(s.amps()[compose_index(c, d)]);
        }
    return rho;
}

}  // namespace qss

#endif
