#ifndef QSS_CSS_HPP
#define QSS_CSS_HPP

// Quantum polynomial codes: the CSS construction from the evaluation code
// V = V^delta and the scaled dual family W = W^{delta'}, encoding one qupit.
// Provides quantum syndromes and Pauli equivalence classes, the encoding
// circuit, erasure-interpolation circuits, and the local membership checks
// for a suspect set B (syndrome functionals supported outside B, in both
// bases).

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "qss/circuit.hpp"
#include "qss/field.hpp"
#include "qss/pauli.hpp"
#include "qss/rs.hpp"

namespace qss {

using SupportSet = std::set<std::size_t>;

struct QuantumSyndrome {
    ClassicalSyndrome v_part;  // computational basis, length n - dim V
    ClassicalSyndrome w_part;  // Fourier basis, length n - dim W

    bool is_zero() const {
        for (Fe v : v_part)
            if (v) return false;
        for (Fe v : w_part)
            if (v) return false;
        return true;
    }
    bool operator==(const QuantumSyndrome& o) const {
        return v_part == o.v_part && w_part == o.w_part;
    }
};

// One local check: measure the linear combination of wires given by `coeffs`
// in the stated basis; membership requires outcome 0.
struct CheckMeasurement {
    bool fourier_basis = false;
    FeVec coeffs;
};

class CssCode {
  public:
    CssCode() = default;
    CssCode(FieldParams params, std::uint32_t delta)
        : params_(params),
          delta_(delta),
          v_code_(params, delta),
          v0_code_(params, delta, true),
          w_code_(v0_code_.dual()),
          w0_code_(v_code_.dual()),
          d_(scaling_vector(params)) {
        if (delta >= params.n) throw Error("degree bound out of range");
    }

    const FieldParams& params() const { return params_; }
    std::uint32_t p() const { return params_.p; }
    std::size_t n() const { return params_.n; }
    std::uint32_t delta() const { return delta_; }
    std::uint32_t delta_prime() const { return params_.n - delta_ - 1; }

    const RsCode& v_code() const { return v_code_; }    // V^delta
    const RsCode& v0_code() const { return v0_code_; }  // V_0^delta
    const RsCode& w_code() const { return w_code_; }    // W^{delta'} = (V_0)^perp
    const RsCode& w0_code() const { return w0_code_; }  // W_0^{delta'} = V^perp
    const FeVec& scaling() const { return d_; }

    // one encoded qupit
    std::size_t encoded_dim() const { return v_code_.dim() - v0_code_.dim(); }

    QuantumSyndrome syndrome(const PauliOp& e) const {
        return {rs_syndrome(v_code_, e.x), rs_syndrome(w_code_, e.z)};
    }

    // Coset invariants that refine the syndrome down to the logical action:
    // x modulo V_0 is (V-syndrome, sum d_i x_i); z modulo W_0 is
    // (W-syndrome, sum z_i).
    Fe x_logical(const FeVec& x) const { return dot(p(), d_, x); }
    Fe z_logical(const FeVec& z) const {
        Fe acc = 0;
        for (Fe v : z) acc = fp::add(p(), acc, v);
        return acc;
    }

    // Equivalent Paulis act identically on the code space, including the
    // logical action.
    bool equivalent(const PauliOp& a, const PauliOp& b) const {
        return syndrome(a) == syndrome(b) && x_logical(a.x) == x_logical(b.x) &&
               z_logical(a.z) == z_logical(b.z);
    }

    // Representative logical operators.
    PauliOp logical_x() const {
        PauliOp e(p(), n());
        e.x = FeVec(n(), 1);  // constant polynomial 1
        return e;
    }
    PauliOp logical_z() const {
        PauliOp e(p(), n());
        e.z = d_;  // scaled constant, in W \ W_0
        return e;
    }

    // --- circuits -----------------------------------------------------------

    // Basis-state linear map |x> -> |Mx| as CADD/MUL/SWAP gates on the first
    // M.rows wires of a circuit.
    static std::vector<GateOp> linear_map_gates(std::uint32_t p, FieldMatrix m) {
        if (m.rows != m.cols) throw Error("linear map must be square");
        std::size_t dim = m.rows;
        struct RecOp {
            int kind;  // 0 swap, 1 scale, 2 addrow (dst += f*src)
            std::size_t a, b;
            Fe f;
        };
        std::vector<RecOp> rec;
        // row-reduce M to the identity, recording the row operations
        for (std::size_t col = 0; col < dim; ++col) {
            std::size_t pivot = col;
            while (pivot < dim && m.at(pivot, col) == 0) ++pivot;
            if (pivot == dim) throw SingularMatrix();
            if (pivot != col) {
                for (std::size_t c = 0; c < dim; ++c) std::swap(m.at(pivot, c), m.at(col, c));
                rec.push_back({0, pivot, col, 0});
            }
            Fe inv = fp::inv(p, m.at(col, col));
            if (inv != 1) {
                for (std::size_t c = 0; c < dim; ++c) m.at(col, c) = fp::mul(p, m.at(col, c), inv);
                rec.push_back({1, col, 0, inv});
            }
            for (std::size_t r = 0; r < dim; ++r) {
                if (r == col || m.at(r, col) == 0) continue;
                Fe f = m.at(r, col);
                for (std::size_t c = 0; c < dim; ++c)
                    m.at(r, c) = fp::sub(p, m.at(r, c), fp::mul(p, f, m.at(col, c)));
                rec.push_back({2, col, r, fp::neg(p, f)});  // row r += (-f) * row col
            }
        }
        // gates are the inverses of the recorded operations, last first
        std::vector<GateOp> gates;
        for (auto it = rec.rbegin(); it != rec.rend(); ++it) {
            switch (it->kind) {
                case 0:
                    gates.push_back(GateOp::swap(std::uint32_t(it->a), std::uint32_t(it->b)));
                    break;
                case 1:
                    gates.push_back(GateOp::mul(fp::inv(p, it->f), std::uint32_t(it->a)));
                    break;
                case 2:
                    gates.push_back(GateOp::cadd(fp::neg(p, it->f), std::uint32_t(it->a),
                                                 std::uint32_t(it->b)));
                    break;
            }
        }
        return gates;
    }

    // Encoding circuit: wire 0 carries the input; ancillas are delta plus
    // states and n-delta-1 zeros; the Vandermonde relabeling turns the
    // coefficient register into the evaluation register.
    Circuit encoding_circuit() const {
        Circuit c(std::uint32_t(n()), p());
        for (std::uint32_t w = 1; w <= delta_; ++w) c.push(GateOp::prep_plus(w));
        for (std::uint32_t w = delta_ + 1; w < n(); ++w) c.push(GateOp::prep_zero(w));
        for (auto& g : linear_map_gates(p(), vandermonde(params_, params_.n))) c.push(g);
        return c;
    }

    // Inverse of the encoding relabeling restricted to chosen positions:
    // maps the values at `positions` (|positions| = delta+1) to
    // (q(0), c_1, ..., c_delta) on those same wires, in order.
    FieldMatrix interpolation_matrix(const std::vector<std::size_t>& positions) const {
        if (positions.size() != delta_ + 1) throw Error("need exactly delta+1 positions");
        FieldMatrix a(delta_ + 1, delta_ + 1);
        for (std::size_t r = 0; r < positions.size(); ++r) {
            Fe x = Fe((positions[r] + 1) % p());
            Fe pw = 1;
            for (std::size_t jc = 0; jc <= delta_; ++jc) {
                a.at(r, jc) = pw;
                pw = fp::mul(p(), pw, x);
            }
        }
        // inverse via solving against identity columns
        FieldMatrix inv(delta_ + 1, delta_ + 1);
        for (std::size_t col = 0; col <= delta_; ++col) {
            FeVec e(delta_ + 1, 0);
            e[col] = 1;
            FeVec sol = solve_linear(p(), a, e);
            for (std::size_t r = 0; r <= delta_; ++r) inv.at(r, col) = sol[r];
        }
        return inv;
    }

    // Syndrome functionals for the local membership test with suspect set b:
    // a basis of the words in V-perp (resp. W-perp) supported outside b,
    // measured in the computational (resp. Fourier) basis.
    std::vector<CheckMeasurement> membership_checks(const SupportSet& b) const {
        std::vector<CheckMeasurement> checks;
        for (bool fourier : {false, true}) {
            const RsCode& dual = fourier ? v0_code_ /* W-perp = V_0 */ : w0_code_;
            auto rows = dual.basis();
            // restrict the span to words vanishing on b
            FieldMatrix m(b.size(), rows.size());
            std::size_t r = 0;
            for (std::size_t pos : b) {
                for (std::size_t j = 0; j < rows.size(); ++j) m.at(r, j) = rows[j][pos];
                ++r;
            }
            std::vector<FeVec> combos;
            if (b.empty()) {
                combos.assign(rows.size(), FeVec(rows.size(), 0));
                for (std::size_t j = 0; j < rows.size(); ++j) combos[j][j] = 1;
            } else {
                combos = null_space(p(), m);
            }
            for (const FeVec& lam : combos) {
                FeVec coeffs(n(), 0);
                for (std::size_t j = 0; j < rows.size(); ++j)
                    for (std::size_t i = 0; i < n(); ++i)
                        coeffs[i] = fp::add(p(), coeffs[i],
                                            fp::mul(p(), lam[j], rows[j][i]));
                bool on_b = false;
                for (std::size_t pos : b) on_b |= coeffs[pos] != 0;
                if (on_b) throw ContractViolation("check functional touches the suspect set");
                bool zero = true;
                for (Fe v : coeffs) zero &= v == 0;
                if (!zero) checks.push_back({fourier, std::move(coeffs)});
            }
        }
        return checks;
    }

  private:
    FieldParams params_;
    std::uint32_t delta_ = 0;
    RsCode v_code_, v0_code_, w_code_, w0_code_;
    FeVec d_;
};

}  // namespace qss

#endif
