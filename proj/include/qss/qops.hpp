#ifndef QSS_QOPS_HPP
#define QSS_QOPS_HPP

// Code-aware operations on quantum memory: linear-functional measurements in
// either basis, encoding, erasure interpolation, and full syndrome decoding
// of an encoded block.  Everything here is Clifford, so it runs at full
// protocol scale on the stabilizer backend.

#include <algorithm>
#include <optional>
#include <vector>

#include "qss/css.hpp"
#include "qss/memory.hpp"

namespace qss {

// Measure sum_j coeffs[j] * wire_j in the computational basis (or, with
// fourier set, after rotating the touched wires into the Fourier basis).
// Rotating, adding into a |0> ancilla and un-rotating is the same as
// measuring the joint observable Z^c (computational) or X^c (Fourier, since
// F^{-1} Z^c F = X^c wire by wire); the stabilizer backend measures that
// observable directly.
inline Fe measure_functional(QuantumMemory& mem, const std::vector<WireId>& wires,
                             const FeVec& coeffs, bool fourier, CounterRng& rng) {
    std::uint32_t p = mem.p();
    std::vector<std::size_t> touched;
    for (std::size_t j = 0; j < wires.size(); ++j)
        if (coeffs[j] % p != 0) touched.push_back(j);
    if (touched.empty()) return 0;
    if (mem.kind() == BackendKind::Stabilizer) {
        FeVec xv(wires.size(), 0), zv(wires.size(), 0);
        for (std::size_t j : touched) (fourier ? xv[j] : zv[j]) = coeffs[j] % p;
        return mem.measure_pauli_wires(wires, xv, zv, rng);
    }
    if (fourier)
        for (std::size_t j : touched) mem.fourier(wires[j], 1, rng);
    WireId anc = mem.alloc_zero(rng);
    for (std::size_t j : touched) mem.cadd(coeffs[j] % p, wires[j], anc, rng);
    Fe outcome = mem.measure(anc, rng);
    mem.discard(anc, rng);
    if (fourier)
        for (std::size_t j : touched) mem.fourier_inv(wires[j], 1, rng);
    return outcome;
}

// Run a basis-state linear relabeling |x> -> |Mx> over the given wires.
inline void apply_linear_map(QuantumMemory& mem, const std::vector<WireId>& wires,
                             const FieldMatrix& m, CounterRng& rng) {
    for (const GateOp& g : CssCode::linear_map_gates(mem.p(), m)) {
        switch (g.kind) {
            case GateKind::CAdd: mem.cadd(g.param, wires[g.wires[0]], wires[g.wires[1]], rng); break;
            case GateKind::Mul: mem.mul(wires[g.wires[0]], g.param, rng); break;
            case GateKind::Swap: mem.swap_wires(wires[g.wires[0]], wires[g.wires[1]], rng); break;
            default: throw ContractViolation("unexpected gate in linear map");
        }
    }
}

// Encode `input` into n freshly allocated component wires (input becomes the
// constant coefficient; delta ancillas in sum_a |a>, the rest in |0>).
inline std::vector<WireId> encode_state(QuantumMemory& mem, const CssCode& code,
                                        WireId input, CounterRng& rng,
                                        std::uint32_t owner = kOwnerProtocol) {
    std::vector<WireId> wires;
    wires.push_back(input);
    for (std::uint32_t j = 1; j < code.n(); ++j)
        wires.push_back(j <= code.delta() ? mem.alloc_plus(rng, owner)
                                          : mem.alloc_zero(rng, owner));
    apply_linear_map(mem, wires, vandermonde(code.params(), code.params().n), rng);
    return wires;
}

// Extract the logical qupit from clean positions, leaving an encoding of |0>
// behind.  `honest` must contain at least delta+1 usable positions; the
// lexicographically first delta+1 are used.
inline WireId ideal_interpolate(QuantumMemory& mem, const CssCode& code,
                                const std::vector<WireId>& wires,
                                const SupportSet& honest, CounterRng& rng) {
    std::vector<std::size_t> chosen(honest.begin(), honest.end());
    if (chosen.size() < code.delta() + 1) throw InsufficientShares();
    chosen.resize(code.delta() + 1);

    std::vector<WireId> sub;
    for (std::size_t pos : chosen) sub.push_back(wires[pos]);
    FieldMatrix to_coeffs = code.interpolation_matrix(chosen);
    apply_linear_map(mem, sub, to_coeffs, rng);

    WireId out = mem.alloc_zero(rng);
    mem.swap_wires(out, sub[0], rng);  // out now holds q(0); sub[0] holds 0

    // strip the constant term from the untouched positions
    for (std::size_t pos = 0; pos < wires.size(); ++pos) {
        if (std::find(chosen.begin(), chosen.end(), pos) != chosen.end()) continue;
        mem.cadd(fp::neg(mem.p(), 1), out, wires[pos], rng);
    }

    // rebuild evaluations of the zero-constant polynomial on the chosen wires
    FieldMatrix to_values(code.delta() + 1, code.delta() + 1);
    {
        FieldMatrix a(code.delta() + 1, code.delta() + 1);
        for (std::size_t r = 0; r < chosen.size(); ++r) {
            Fe x = Fe((chosen[r] + 1) % mem.p());
            Fe pw = 1;
            for (std::size_t jc = 0; jc <= code.delta(); ++jc) {
                a.at(r, jc) = pw;
                pw = fp::mul(mem.p(), pw, x);
            }
        }
        to_values = a;
    }
    apply_linear_map(mem, sub, to_values, rng);
    return out;
}

// Measured quantum syndrome of an encoded block (collapsing).  On the
// classical share backend the Fourier-side measurements carry no
// information, so the phase syndrome reads zero there.
inline QuantumSyndrome measure_syndrome(QuantumMemory& mem, const CssCode& code,
                                        const std::vector<WireId>& wires,
                                        CounterRng& rng) {
    QuantumSyndrome s;
    for (const Codeword& row : code.w0_code().basis())
        s.v_part.push_back(measure_functional(mem, wires, row, false, rng));
    for (const Codeword& row : code.v0_code().basis())
        s.w_part.push_back(mem.kind() == BackendKind::Share
                               ? 0
                               : measure_functional(mem, wires, row, true, rng));
    return s;
}

// Pauli correction supported on `support` consistent with a measured
// syndrome, if one exists.  An error X^x Z^z produces functional outcomes
// c.x (computational) and -c.z (Fourier).
inline std::optional<PauliOp> correction_on_support(const CssCode& code,
                                                    const QuantumSyndrome& s,
                                                    const std::vector<std::size_t>& support) {
    std::uint32_t p = code.p();
    auto solve_side = [&](const std::vector<Codeword>& rows, const FeVec& rhs)
        -> std::optional<FeVec> {
        FieldMatrix m(rows.size(), support.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < support.size(); ++c)
                m.at(r, c) = rows[r][support[c]];
        return solve_any(p, m, rhs);
    };
    auto xs = solve_side(code.w0_code().basis(), s.v_part);
    if (!xs) return std::nullopt;
    FeVec neg_w;
    for (Fe v : s.w_part) neg_w.push_back(fp::neg(p, v));
    auto zs = solve_side(code.v0_code().basis(), neg_w);
    if (!zs) return std::nullopt;
    PauliOp e(p, code.n());
    for (std::size_t c = 0; c < support.size(); ++c) {
        e.x[support[c]] = (*xs)[c];
        e.z[support[c]] = (*zs)[c];
    }
    return e;
}

// All supports of size <= max_size containing `must_include`, smallest first.
inline std::vector<std::vector<std::size_t>> candidate_supports(
    std::size_t n, std::size_t max_size, const SupportSet& must_include) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> base(must_include.begin(), must_include.end());
    if (base.size() > max_size) return out;
    std::vector<std::size_t> extra;
    for (std::size_t i = 0; i < n; ++i)
        if (!must_include.count(i)) extra.push_back(i);
    std::size_t room = max_size - base.size();
    for (std::size_t k = 0; k <= room; ++k) {
        // choose k extra positions
        std::vector<std::size_t> idx(k);
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start,
                                                                std::size_t depth) {
            if (depth == k) {
                std::vector<std::size_t> s = base;
                for (std::size_t j = 0; j < k; ++j) s.push_back(extra[idx[j]]);
                std::sort(s.begin(), s.end());
                out.push_back(std::move(s));
                return;
            }
            for (std::size_t i = start; i < extra.size(); ++i) {
                idx[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
    }
    return out;
}

// Uniform superposition over all codewords of an RS code (scaled or not):
// dim plus-wires feed the coefficient register of an invertible extension of
// the generator matrix.
inline std::vector<WireId> prepare_code_superposition(QuantumMemory& mem, const RsCode& code,
                                                      CounterRng& rng,
                                                      std::uint32_t owner = kOwnerProtocol) {
    std::size_t n = code.n();
    auto basis = code.basis();
    FieldMatrix m(n, n);
    std::size_t col = 0;
    for (const auto& b : basis) {
        for (std::size_t r = 0; r < n; ++r) m.at(r, col) = b[r];
        ++col;
    }
    // extend with unit columns, keeping the matrix invertible
    for (std::size_t unit = 0; unit < n && col < n; ++unit) {
        for (std::size_t r = 0; r < n; ++r) m.at(r, col) = (r == unit) ? 1 : 0;
        if (matrix_rank(code.p(), m) == col + 1) ++col;
    }
    if (col != n) throw ContractViolation("could not extend generator matrix");
    std::vector<WireId> wires;
    for (std::size_t i = 0; i < n; ++i)
        wires.push_back(i < basis.size() ? mem.alloc_plus(rng, owner)
                                         : mem.alloc_zero(rng, owner));
    apply_linear_map(mem, wires, m, rng);
    return wires;
}

// Basis of the words of `code` vanishing on every position in `avoid`.
inline std::vector<Codeword> code_basis_avoiding(const RsCode& code, const SupportSet& avoid) {
    auto rows = code.basis();
    if (avoid.empty()) return rows;
    FieldMatrix m(avoid.size(), rows.size());
    std::size_t r = 0;
    for (std::size_t pos : avoid) {
        for (std::size_t j = 0; j < rows.size(); ++j) m.at(r, j) = rows[j][pos];
        ++r;
    }
    std::vector<Codeword> out;
    for (const FeVec& lam : null_space(code.p(), m)) {
        Codeword w(code.n(), 0);
        for (std::size_t j = 0; j < rows.size(); ++j)
            for (std::size_t i = 0; i < code.n(); ++i)
                w[i] = fp::add(code.p(), w[i], fp::mul(code.p(), lam[j], rows[j][i]));
        bool zero = true;
        for (Fe v : w) zero &= v == 0;
        if (!zero) out.push_back(std::move(w));
    }
    return out;
}

// Exact test that the joint state of `wires` lies in span{ |w> : w agrees
// with a codeword outside b }.  With `fourier` set the same is tested in the
// rotated basis (the X-type stabilizer family).
inline bool in_code_span(QuantumMemory& mem, const std::vector<WireId>& wires,
                         const RsCode& code, const SupportSet& b, bool fourier,
                         CounterRng& rng) {
    for (const Codeword& c : code_basis_avoiding(code.dual(), b)) {
        PauliOp e(mem.p(), wires.size());
        if (!fourier) {
            e.z = c;
        } else {
            for (std::size_t i = 0; i < c.size(); ++i) e.x[i] = fp::neg(mem.p(), c[i]);
        }
        if (!mem.wires_have_stabilizer(wires, e, rng)) return false;
    }
    return true;
}

struct BlockDecodeResult {
    bool ok = false;
    WireId output = 0;
    SupportSet corrected;  // support of the correction actually applied
};

// Full decoding of one encoded block: measure the quantum syndrome, search
// for a correction supported on some candidate set containing `suspects` of
// size at most max_errors, apply it and extract the logical qupit.
inline BlockDecodeResult decode_block(QuantumMemory& mem, const CssCode& code,
                                      const std::vector<WireId>& wires,
                                      const SupportSet& suspects,
                                      std::size_t max_errors, CounterRng& rng) {
    QuantumSyndrome s = measure_syndrome(mem, code, wires, rng);
    std::optional<PauliOp> corr;
    for (const auto& support : candidate_supports(code.n(), max_errors, suspects)) {
        corr = correction_on_support(code, s, support);
        if (corr) break;
    }
    if (!corr) return {};
    PauliOp fix = corr->inverse();
    for (std::size_t i = 0; i < code.n(); ++i)
        mem.apply_pauli(wires[i], fix.x[i], fix.z[i], rng);
    SupportSet all;
    for (std::size_t i = 0; i < code.n(); ++i) all.insert(i);
    BlockDecodeResult r;
    r.ok = true;
    r.corrected = corr->support();
    r.output = ideal_interpolate(mem, code, wires, all, rng);
    return r;
}

}  // namespace qss

#endif
