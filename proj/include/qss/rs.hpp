#ifndef QSS_RS_HPP
#define QSS_RS_HPP

// Classical Reed-Solomon evaluation codes and their scaled duals.
//
// The unscaled code of degree bound delta is the set of evaluation vectors
// (q(1), ..., q(n)) of polynomials with deg q <= delta; the through-zero
// variant additionally requires q(0) = 0.  Duals of these codes are the same
// family with degree n-delta-1 and every component scaled by a fixed nonzero
// d_i, where d is the vector with sum_i d_i f(i) = f(0) for all deg f < n.
//
// Decoding is a bounded exhaustive support search: at desk scale (n <= 13)
// trying every candidate error support is simple and certifiably
// maximum-likelihood, and it doubles as the reference oracle for everything
// built on top.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "qss/errors.hpp"
#include "qss/field.hpp"
#include "qss/rng.hpp"

namespace qss {

using Codeword = FeVec;                  // always length n
using ClassicalSyndrome = FeVec;         // length n - dim(code)

// Solves the transpose Vandermonde system so that sum_i d_i f(i) = f(0) for
// every polynomial of degree < n.  All entries come out nonzero.
inline FeVec scaling_vector(const FieldParams& params) {
    std::uint32_t p = params.p;
    std::size_t n = params.n;
    FieldMatrix vt(n, n);
    FieldMatrix v = vandermonde(params, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) vt.at(r, c) = v.at(c, r);
    FeVec rhs(n, 0);
    rhs[0] = 1;  // f(0) picks out the constant coefficient
    return solve_linear(p, vt, rhs);
}

struct RsCode {
    FieldParams params;
    std::uint32_t delta = 0;        // degree bound
    bool through_zero = false;      // restrict to q(0) = 0
    std::optional<FeVec> scaling;   // present for dual/scaled codes

    RsCode() = default;
    RsCode(FieldParams pr, std::uint32_t d, bool tz = false,
           std::optional<FeVec> sc = std::nullopt)
        : params(pr), delta(d), through_zero(tz), scaling(std::move(sc)) {
        if (delta >= params.n) throw Error("degree bound must stay below n");
        if (scaling) {
            if (scaling->size() != params.n) throw Error("scaling length mismatch");
            for (Fe s : *scaling)
                if (s == 0) throw Error("scaling entries must be nonzero");
        }
    }

    std::uint32_t p() const { return params.p; }
    std::size_t n() const { return params.n; }
    std::size_t dim() const { return delta + 1 - (through_zero ? 1 : 0); }
    std::size_t distance() const { return params.n - delta + (through_zero ? 1 : 0); }
    // errors correctable with no erasures
    std::size_t t() const { return (params.n - delta - 1) / 2; }

    Fe scale_at(std::size_t i) const { return scaling ? (*scaling)[i] : 1; }

    // lowest monomial degree present
    std::uint32_t min_degree() const { return through_zero ? 1 : 0; }

    // Evaluation vector of the given polynomial, component-wise scaled.
    Codeword encode_poly(const FieldPoly& q) const {
        Codeword w(n(), 0);
        for (std::size_t i = 0; i < n(); ++i)
            w[i] = fp::mul(p(), scale_at(i), q.eval(p(), Fe((i + 1) % p())));
        return w;
    }

    // Generator basis: scaled evaluations of the monomials x^j.
    std::vector<Codeword> basis() const {
        std::vector<Codeword> rows;
        for (std::uint32_t j = min_degree(); j <= delta; ++j) {
            FeVec c(j + 1, 0);
            c[j] = 1;
            rows.push_back(encode_poly(FieldPoly(std::move(c))));
        }
        return rows;
    }

    // The dual under the standard dot product: degree flips to n-delta-1,
    // the through-zero flag toggles and each scale s_i becomes d_i / s_i.
    RsCode dual() const {
        FeVec d = scaling_vector(params);
        FeVec sc(n());
        for (std::size_t i = 0; i < n(); ++i)
            sc[i] = fp::div(p(), d[i], scale_at(i));
        return RsCode(params, params.n - delta - 1, !through_zero, std::move(sc));
    }

    // Interpolated value q(0) of a clean codeword (unscaling first).
    Fe secret_of(const Codeword& w) const {
        std::vector<std::pair<Fe, Fe>> pts;
        for (std::size_t i = 0; i <= delta && i < n(); ++i)
            pts.push_back({Fe((i + 1) % p()), fp::div(p(), w[i], scale_at(i))});
        return interpolate(p(), pts).eval(p(), 0);
    }
};

// The syndrome map is fixed deterministically as the dot products against the
// dual code's monomial basis, so transcripts are bit-exact.
inline ClassicalSyndrome rs_syndrome(const RsCode& code, const Codeword& w) {
    ClassicalSyndrome s;
    for (const Codeword& row : code.dual().basis())
        s.push_back(dot(code.p(), row, w));
    return s;
}

inline bool rs_detect(const RsCode& code, const Codeword& w) {
    for (Fe v : rs_syndrome(code, w))
        if (v != 0) return false;
    return true;
}

// Random codeword interpolating to `secret`; also returns the polynomial.
inline std::pair<Codeword, FieldPoly> rs_share(const RsCode& code, Fe secret,
                                               CounterRng& rng) {
    if (code.scaling) throw Error("rs_share expects an evaluation (unscaled) code");
    if (code.through_zero && secret != 0)
        throw Error("through-zero code can only share 0");
    FeVec coeffs(code.delta + 1, 0);
    coeffs[0] = secret;
    for (std::uint32_t j = 1; j <= code.delta; ++j)
        coeffs[j] = rng.field_element(code.p());
    FieldPoly q(std::move(coeffs));
    return {code.encode_poly(q), q};
}

enum class DecodeStatus { Decoded, Detected };

struct DecodeOutcome {
    DecodeStatus status = DecodeStatus::Detected;
    Codeword codeword;                 // corrected word, when Decoded
    std::set<std::size_t> error_support;  // additional errors outside erasures
    Fe secret = 0;                     // q(0), when Decoded
};

namespace detail {

// Try to fit a codeword to `word` assuming the positions in `unknown` carry
// arbitrary values.  Returns the unique consistent codeword, or nothing.
inline std::optional<Codeword> fit_outside(const RsCode& code, const Codeword& word,
                                           const std::vector<bool>& unknown) {
    std::uint32_t p = code.p();
    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < code.n(); ++i)
        if (!unknown[i]) known.push_back(i);
    if (known.size() < code.dim()) return std::nullopt;

    // Interpolate through dim() of the known positions, honoring the
    // through-zero constraint by fitting (q(x) - 0) / x when required.
    std::vector<std::pair<Fe, Fe>> pts;
    for (std::size_t k = 0; k < code.dim(); ++k) {
        std::size_t i = known[k];
        Fe x = Fe((i + 1) % p);
        Fe y = fp::div(p, word[i], code.scale_at(i));
        if (code.through_zero) y = fp::div(p, y, x);
        pts.push_back({x, y});
    }
    FieldPoly fit = interpolate(p, pts);
    FieldPoly q;
    if (code.through_zero) {
        FeVec c(fit.coeffs.size() + 1, 0);
        for (std::size_t i = 0; i < fit.coeffs.size(); ++i) c[i + 1] = fit.coeffs[i];
        q = FieldPoly(std::move(c));
    } else {
        q = fit;
    }
    if (q.degree() > int(code.delta)) return std::nullopt;
    Codeword cand = code.encode_poly(q);
    for (std::size_t k = code.dim(); k < known.size(); ++k)
        if (cand[known[k]] != word[known[k]]) return std::nullopt;
    return cand;
}

inline void support_combinations(std::size_t n, std::size_t size,
                                 const std::vector<bool>& excluded,
                                 std::vector<std::size_t>& cur,
                                 std::size_t start,
                                 const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (cur.size() == size) {
        fn(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        if (excluded[i]) continue;
        cur.push_back(i);
        support_combinations(n, size, excluded, cur, i + 1, fn);
        cur.pop_back();
    }
}

}  // namespace detail

// Error/erasure decoding.  With b = |erasures| and t errors correctable by
// the full code, the punctured code has distance 2t+1-b: up to t-b further
// errors are corrected, anything beyond that is Detected.
inline DecodeOutcome rs_decode(const RsCode& code, const Codeword& word,
                               const std::set<std::size_t>& erasures = {}) {
    std::size_t t = code.t();
    std::size_t b = erasures.size();
    if (b > 2 * t) throw TooManyErasures();
    std::size_t budget = t >= b ? t - b : 0;

    std::vector<bool> erased(code.n(), false);
    for (std::size_t i : erasures) {
        if (i >= code.n()) throw Error("erasure index out of range");
        erased[i] = true;
    }

    for (std::size_t size = 0; size <= budget; ++size) {
        std::vector<Codeword> found;
        std::vector<std::set<std::size_t>> found_supports;
        std::vector<std::size_t> cur;
        detail::support_combinations(
            code.n(), size, erased, cur, 0,
            [&](const std::vector<std::size_t>& supp) {
                std::vector<bool> unknown = erased;
                for (std::size_t i : supp) unknown[i] = true;
                auto cand = detail::fit_outside(code, word, unknown);
                if (!cand) return;
                // record genuinely new codewords only
                for (const Codeword& f : found)
                    if (f == *cand) return;
                std::set<std::size_t> real_support;
                for (std::size_t i : supp)
                    if ((*cand)[i] != word[i]) real_support.insert(i);
                found.push_back(*cand);
                found_supports.push_back(std::move(real_support));
            });
        if (found.size() > 1)
            throw ContractViolation("ambiguous decode inside distance bound - parameter bug");
        if (found.size() == 1) {
            DecodeOutcome out;
            out.status = DecodeStatus::Decoded;
            out.codeword = found[0];
            out.error_support = found_supports[0];
            out.secret = code.secret_of(found[0]);
            return out;
        }
    }
    return {};  // Detected
}

}  // namespace qss

#endif
