#ifndef QSS_TABLEAU_HPP
#define QSS_TABLEAU_HPP

// Qudit stabilizer tableau over GF(p), p an odd prime.  A state on m wires is
// the joint +1 eigenvector of m independent commuting operators
// w^{phi} X^x Z^z, one per generator row.  Phases are exact integer exponents
// mod p.  All gates of the universal set except Toffoli are Clifford here.
//
// Alongside each stabilizer generator S_i the tableau tracks a destabilizer
// D_i with symplectic pairing <D_i, S_j> = delta_ij.  The pairing turns
// "express this operator over the generators" into m inner products, which
// keeps deterministic measurements and group-membership tests cheap.

#include <cstdint>
#include <optional>
#include <vector>

#include "qss/circuit.hpp"
#include "qss/errors.hpp"
#include "qss/pauli.hpp"
#include "qss/rng.hpp"
#include "qss/statevector.hpp"

namespace qss {

class StabilizerTableau {
  public:
    StabilizerTableau() = default;

    // fresh register |0...0>
    StabilizerTableau(std::uint32_t p, std::uint32_t m) : p_(p), m_(m) {
        if (p < 3) throw Error("stabilizer backend needs an odd prime");
        rows_.reserve(m);
        dest_.reserve(m);
        for (std::uint32_t i = 0; i < m; ++i) {
            Row s(m), d(m);
            s.z[i] = 1;                 // Z_i stabilizes |0>
            d.x[i] = Fe(p - 1);         // X_i^{-1} pairs to +1 with Z_i
            rows_.push_back(std::move(s));
            dest_.push_back(std::move(d));
        }
    }

    struct Row {
        FeVec x, z;
        Fe phase = 0;
        Row() = default;
        explicit Row(std::size_t m) : x(m, 0), z(m, 0) {}
    };

    std::uint32_t p() const { return p_; }
    std::uint32_t num_qupits() const { return m_; }
    const std::vector<Row>& rows() const { return rows_; }

    PauliOp row_pauli(std::size_t i) const {
        return PauliOp(p_, rows_[i].x, rows_[i].z, rows_[i].phase);
    }

    // Install stabilizer/destabilizer pairs directly (block embedding).
    void install_pair(std::size_t i, const PauliOp& stab, const PauliOp& destab) {
        rows_[i].x = stab.x;
        rows_[i].z = stab.z;
        rows_[i].phase = stab.phase;
        dest_[i].x = destab.x;
        dest_[i].z = destab.z;
    }

    PauliOp destab_pauli(std::size_t i) const {
        return PauliOp(p_, dest_[i].x, dest_[i].z, 0);
    }

    // --- gate conjugations -------------------------------------------------
    // Each gate G rewrites every tracked row g as G g G^{-1}.  Destabilizer
    // phases are irrelevant and not maintained.

    void apply_x(std::uint32_t w, Fe c) {
        c %= p_;
        for (auto& r : rows_)
            r.phase = fp::sub(p_, r.phase, fp::mul(p_, c, r.z[w]));
    }

    void apply_z(std::uint32_t w, Fe c) {
        c %= p_;
        for (auto& r : rows_)
            r.phase = fp::add(p_, r.phase, fp::mul(p_, c, r.x[w]));
    }

    void apply_mul(std::uint32_t w, Fe c) {
        c %= p_;
        if (c == 0) throw Error("mul factor must be nonzero");
        Fe cinv = fp::inv(p_, c);
        for (auto& r : rows_) {
            r.x[w] = fp::mul(p_, r.x[w], c);
            r.z[w] = fp::mul(p_, r.z[w], cinv);
        }
        for (auto& r : dest_) {
            r.x[w] = fp::mul(p_, r.x[w], c);
            r.z[w] = fp::mul(p_, r.z[w], cinv);
        }
    }

    void apply_swap(std::uint32_t w1, std::uint32_t w2) {
        for (auto& r : rows_) {
            std::swap(r.x[w1], r.x[w2]);
            std::swap(r.z[w1], r.z[w2]);
        }
        for (auto& r : dest_) {
            std::swap(r.x[w1], r.x[w2]);
            std::swap(r.z[w1], r.z[w2]);
        }
    }

    void apply_cadd(std::uint32_t src, std::uint32_t dst, Fe b) {
        b %= p_;
        for (auto& r : rows_) {
            r.x[dst] = fp::add(p_, r.x[dst], fp::mul(p_, b, r.x[src]));
            r.z[src] = fp::sub(p_, r.z[src], fp::mul(p_, b, r.z[dst]));
        }
        for (auto& r : dest_) {
            r.x[dst] = fp::add(p_, r.x[dst], fp::mul(p_, b, r.x[src]));
            r.z[src] = fp::sub(p_, r.z[src], fp::mul(p_, b, r.z[dst]));
        }
    }

    // F_r X^x Z^z F_r^{-1} = w^{-xz} X^{-z/r} Z^{rx}
    void apply_fourier(std::uint32_t w, Fe r, bool inverse) {
        r %= p_;
        if (r == 0) throw Error("fourier scale must be nonzero");
        Fe rinv = fp::inv(p_, r);
        for (auto& row : rows_) {
            Fe x = row.x[w], z = row.z[w];
            row.phase = fp::sub(p_, row.phase, fp::mul(p_, x, z));
            if (!inverse) {
                row.x[w] = fp::neg(p_, fp::mul(p_, z, rinv));
                row.z[w] = fp::mul(p_, r, x);
            } else {
                row.x[w] = fp::mul(p_, z, rinv);
                row.z[w] = fp::neg(p_, fp::mul(p_, r, x));
            }
        }
        for (auto& row : dest_) {
            Fe x = row.x[w], z = row.z[w];
            if (!inverse) {
                row.x[w] = fp::neg(p_, fp::mul(p_, z, rinv));
                row.z[w] = fp::mul(p_, r, x);
            } else {
                row.x[w] = fp::mul(p_, z, rinv);
                row.z[w] = fp::neg(p_, fp::mul(p_, r, x));
            }
        }
    }

    void apply_pauli(const PauliOp& e) {
        for (auto& r : rows_) {
            Fe comm = fp::sub(p_, dot(p_, e.z, r.x), dot(p_, e.x, r.z));
            r.phase = fp::add(p_, r.phase, comm);
        }
    }

    // --- measurement -------------------------------------------------------

    Fe measure(std::uint32_t w, CounterRng& rng) {
        PauliOp obs(p_, m_);
        obs.z[w] = 1;
        return measure_pauli(obs, &rng, 0);
    }

    // Post-select wire w to an outcome (the wire must measure uniform, or
    // already equal the requested value).
    void force_measure(std::uint32_t w, Fe outcome) {
        PauliOp obs(p_, m_);
        obs.z[w] = 1;
        Fe got = measure_pauli(obs, nullptr, outcome);
        if (got != outcome)
            throw Error("cannot post-select a deterministic wire to another value");
    }

    // Measure a phase-free Pauli observable: the outcome o labels the
    // eigenvalue w^o.  With rng null the forced outcome is used when the
    // result is not deterministic.
    Fe measure_pauli(const PauliOp& obs, CounterRng* rng, Fe forced) {
        std::optional<std::size_t> pivot;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (pauli_symplectic(obs, row_pauli(i)) != 0) {
                pivot = i;
                break;
            }
        if (!pivot) {
            // deterministic: obs is a product of generators, read off the
            // destabilizer pairing
            PauliOp prod(p_, m_);
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                Fe mu = pauli_symplectic(destab_pauli(i), obs);
                if (mu) prod = pauli_compose(prod, pauli_power(row_pauli(i), mu));
            }
            if (prod.x != obs.x || prod.z != obs.z)
                throw ContractViolation("observable commutes but is outside the group");
            return fp::neg(p_, prod.phase);
        }
        Fe outcome = rng ? rng->field_element(p_) : forced;
        Fe s = pauli_symplectic(obs, row_pauli(*pivot));
        PauliOp g = pauli_power(row_pauli(*pivot), fp::inv(p_, s));
        Fe g_xz = dot(p_, g.x, g.z);
        Fe half = fp::inv(p_, 2 % p_);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i != *pivot) {
                Fe si = pauli_symplectic(obs, row_pauli(i));
                if (si) mul_row_inline(rows_[i], g, fp::neg(p_, si), g_xz, half, true);
            }
            Fe sd = pauli_symplectic(obs, destab_pauli(i));
            if (sd && i != *pivot)
                mul_row_inline(dest_[i], g, fp::neg(p_, sd), g_xz, half, false);
        }
        PauliOp ginv = g.inverse();
        dest_[*pivot].x = ginv.x;
        dest_[*pivot].z = ginv.z;
        rows_[*pivot].x = obs.x;
        rows_[*pivot].z = obs.z;
        rows_[*pivot].phase = fp::neg(p_, outcome);
        return outcome;
    }

    bool is_deterministic(std::uint32_t w) const {
        for (const auto& r : rows_)
            if (r.x[w] != 0) return false;
        return true;
    }

    // Outcome of a deterministic wire: Z_w lies in the group, and the
    // destabilizer pairing reads off the generator exponents directly.
    Fe deterministic_outcome(std::uint32_t w) const {
        PauliOp prod(p_, m_);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            Fe mu = fp::neg(p_, dest_[i].x[w]);  // <D_i, Z_w> = -x_{D_i,w}
            if (mu) prod = pauli_compose(prod, pauli_power(row_pauli(i), mu));
        }
        if (!(prod.x == FeVec(m_, 0)))
            throw ContractViolation("destabilizer pairing out of sync");
        // prod = w^{phi} Z_w and the state satisfies prod = +1
        return fp::neg(p_, prod.phase);
    }

    // Exponent vector expressing `target`'s symplectic part over the
    // generators, read off the destabilizer pairing; verifies the result.
    std::optional<FeVec> solve_symplectic(const PauliOp& target) const {
        FeVec mu(rows_.size(), 0);
        PauliOp prod(p_, m_);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            mu[i] = fp::reduce(p_, std::int64_t(pauli_symplectic(destab_pauli(i), target)));
            if (mu[i]) prod = pauli_compose(prod, pauli_power(row_pauli(i), mu[i]));
        }
        if (prod.x != target.x || prod.z != target.z) return std::nullopt;
        return mu;
    }

    // Group membership including the phase.
    bool contains(const PauliOp& e) const {
        PauliOp prod(p_, m_);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            Fe mu = fp::reduce(p_, std::int64_t(pauli_symplectic(destab_pauli(i), e)));
            if (mu) prod = pauli_compose(prod, pauli_power(row_pauli(i), mu));
        }
        return prod.x == e.x && prod.z == e.z && prod.phase == e.phase;
    }

    // The unique stabilized pure state (global phase arbitrary).
    StateVector to_statevector() const {
        std::uint64_t dim = 1;
        for (std::uint32_t i = 0; i < m_; ++i) {
            dim *= p_;
            if (dim > (1ull << 20)) throw Error("tableau too large to expand");
        }
        StabilizerTableau copy = *this;
        FeVec digits(m_, 0);
        for (std::uint32_t w = 0; w < m_; ++w) {
            if (copy.is_deterministic(w)) {
                digits[w] = copy.deterministic_outcome(w);
            } else {
                copy.force_measure(w, 0);
                digits[w] = 0;
            }
        }
        StateVector base = StateVector::basis_state(p_, digits);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            StateVector acc(p_, m_);
            for (auto& a : acc.amps()) a = 0;
            for (Fe c = 0; c < p_; ++c) {
                StateVector term = base;
                term.apply_pauli(pauli_power(row_pauli(i), c));
                for (std::uint64_t j = 0; j < acc.dim(); ++j)
                    acc.amps()[j] += term.amps()[j] / double(p_);
            }
            base = std::move(acc);
        }
        base.normalize();
        return base;
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
            case GateKind::Toffoli: throw UnsupportedGate("stabilizer", "TOFF");
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

    // invariant checks (used by tests)
    bool generators_commute() const {
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = i + 1; j < rows_.size(); ++j)
                if (pauli_symplectic(row_pauli(i), row_pauli(j)) != 0) return false;
        return true;
    }

    bool full_rank() const {
        FieldMatrix m(rows_.size(), 2 * m_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::uint32_t w = 0; w < m_; ++w) {
                m.at(i, w) = rows_[i].x[w];
                m.at(i, m_ + w) = rows_[i].z[w];
            }
        return matrix_rank(p_, m) == rows_.size();
    }

    bool pairing_consistent() const {
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = 0; j < rows_.size(); ++j) {
                Fe want = (i == j) ? 1 : 0;
                if (pauli_symplectic(destab_pauli(i), row_pauli(j)) % p_ != want)
                    return false;
            }
        return true;
    }

    // Remove a wire that has collapsed to |value| (all X supports at w are
    // gone).  Canonicalizes an explicit Z_w generator, clears the column and
    // drops the generator/destabilizer pair, shrinking the register by one.
    void remove_classical_wire(std::uint32_t w, Fe value) {
        std::optional<std::size_t> zidx;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Row& r = rows_[i];
            if (r.x[w] != 0) throw ContractViolation("frozen wire still has X support");
            if (r.z[w] == 0) continue;
            bool single = true;
            for (std::uint32_t c = 0; c < m_ && single; ++c)
                single = (r.x[c] == 0) && (c == w || r.z[c] == 0);
            if (single) {
                zidx = i;
                break;
            }
        }
        if (!zidx) {
            // build the explicit Z_w generator from the pairing and swap it in
            FeVec mu(rows_.size(), 0);
            PauliOp prod(p_, m_);
            std::optional<std::size_t> rep;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                mu[i] = fp::neg(p_, dest_[i].x[w]);
                if (mu[i]) {
                    prod = pauli_compose(prod, pauli_power(row_pauli(i), mu[i]));
                    if (!rep) rep = i;
                }
            }
            if (!rep) throw ContractViolation("Z_w missing from a collapsed wire's group");
            Fe inv_rep = fp::inv(p_, mu[*rep]);
            for (std::size_t j = 0; j < rows_.size(); ++j) {
                if (j == *rep || mu[j] == 0) continue;
                // D_j := D_j * D_rep^{-mu_j / mu_rep} keeps the pairing
                Fe c = fp::neg(p_, fp::mul(p_, mu[j], inv_rep));
                for (std::uint32_t col = 0; col < m_; ++col) {
                    dest_[j].x[col] =
                        fp::add(p_, dest_[j].x[col], fp::mul(p_, c, dest_[*rep].x[col]));
                    dest_[j].z[col] =
                        fp::add(p_, dest_[j].z[col], fp::mul(p_, c, dest_[*rep].z[col]));
                }
            }
            for (std::uint32_t col = 0; col < m_; ++col) {
                dest_[*rep].x[col] = fp::mul(p_, dest_[*rep].x[col], inv_rep);
                dest_[*rep].z[col] = fp::mul(p_, dest_[*rep].z[col], inv_rep);
            }
            rows_[*rep].x = prod.x;
            rows_[*rep].z = prod.z;
            rows_[*rep].phase = prod.phase;
            zidx = rep;
        }
        // normalize the exponent to one (scale the destabilizer inversely)
        if (rows_[*zidx].z[w] != 1) {
            Fe scale = fp::inv(p_, rows_[*zidx].z[w]);
            PauliOp scaled = pauli_power(row_pauli(*zidx), scale);
            rows_[*zidx].x = scaled.x;
            rows_[*zidx].z = scaled.z;
            rows_[*zidx].phase = scaled.phase;
            Fe dinv = fp::inv(p_, scale);
            for (std::uint32_t col = 0; col < m_; ++col) {
                dest_[*zidx].x[col] = fp::mul(p_, dest_[*zidx].x[col], dinv);
                dest_[*zidx].z[col] = fp::mul(p_, dest_[*zidx].z[col], dinv);
            }
        }
        if (rows_[*zidx].phase != fp::neg(p_, value))
            throw ContractViolation("collapsed wire value does not match its generator");
        PauliOp zg = row_pauli(*zidx);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == *zidx || rows_[i].z[w] == 0) continue;
            PauliOp fixed =
                pauli_compose(pauli_power(zg, fp::neg(p_, rows_[i].z[w])), row_pauli(i));
            rows_[i].x = fixed.x;
            rows_[i].z = fixed.z;
            rows_[i].phase = fixed.phase;
        }
        rows_.erase(rows_.begin() + std::ptrdiff_t(*zidx));
        dest_.erase(dest_.begin() + std::ptrdiff_t(*zidx));
        for (auto& r : rows_) {
            r.x.erase(r.x.begin() + w);
            r.z.erase(r.z.begin() + w);
        }
        for (auto& r : dest_) {
            r.x.erase(r.x.begin() + w);
            r.z.erase(r.z.begin() + w);
        }
        --m_;
    }

  private:
    // in-place r := g^k * r; g_xz and half are cached per call site
    void mul_row_inline(Row& r, const PauliOp& g, Fe k, Fe g_xz, Fe half,
                        bool track_phase) {
        if (k == 0) return;
        if (track_phase) {
            Fe tri = fp::mul(p_, fp::mul(p_, k, fp::sub(p_, k, 1 % p_)), half);
            Fe phase_gk = fp::add(p_, fp::mul(p_, k, g.phase), fp::mul(p_, tri, g_xz));
            Fe cross = fp::mul(p_, k, dot(p_, g.z, r.x));
            r.phase = fp::add(p_, fp::add(p_, r.phase, phase_gk), cross);
        }
        for (std::uint32_t i = 0; i < m_; ++i) {
            r.x[i] = fp::add(p_, r.x[i], fp::mul(p_, k, g.x[i]));
            r.z[i] = fp::add(p_, r.z[i], fp::mul(p_, k, g.z[i]));
        }
    }

    std::uint32_t p_ = 0, m_ = 0;
    std::vector<Row> rows_;
    std::vector<Row> dest_;
};

}  // namespace qss

#endif
