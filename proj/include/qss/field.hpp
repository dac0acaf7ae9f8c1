#ifndef QSS_FIELD_HPP
#define QSS_FIELD_HPP

// Exact arithmetic over GF(p), univariate polynomials, interpolation and the
// small dense linear algebra everything else is built on.  Elements are kept
// as canonical residues in [0, p); p is restricted to 31 bits so that every
// product fits in a 64-bit intermediate.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qss/errors.hpp"

namespace qss {

using Fe = std::uint32_t;                 // canonical residue in [0, p)
using FeVec = std::vector<Fe>;

inline bool is_prime_u32(std::uint32_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

// Field modulus p and the number n of evaluation points 1..n.
struct FieldParams {
    std::uint32_t p = 0;
    std::uint32_t n = 0;

    FieldParams() = default;
    FieldParams(std::uint32_t p_, std::uint32_t n_) : p(p_), n(n_) {
        if (p <= 2 || p > (1u << 31) || !is_prime_u32(p))
            throw Error("modulus must be an odd prime below 2^31");
        if (n < 1 || n >= p)
            throw Error("need 1 <= n < p so evaluation points are distinct and nonzero");
    }
};

namespace fp {

inline Fe add(std::uint32_t p, Fe a, Fe b) {
    std::uint64_t s = std::uint64_t(a) + b;
    return Fe(s >= p ? s - p : s);
}

inline Fe sub(std::uint32_t p, Fe a, Fe b) {
    return a >= b ? a - b : Fe(a + std::uint64_t(p) - b);
}

inline Fe neg(std::uint32_t p, Fe a) { return a == 0 ? 0 : Fe(p - a); }

inline Fe mul(std::uint32_t p, Fe a, Fe b) {
    return Fe((std::uint64_t(a) * b) % p);
}

inline Fe pow(std::uint32_t p, Fe a, std::uint64_t e) {
    Fe r = 1 % p;
    Fe base = a;
    while (e) {
        if (e & 1) r = mul(p, r, base);
        base = mul(p, base, base);
        e >>= 1;
    }
    return r;
}

inline Fe inv(std::uint32_t p, Fe a) {
    if (a == 0) throw DivByZero();
    return pow(p, a, p - 2);
}

inline Fe div(std::uint32_t p, Fe a, Fe b) { return mul(p, a, inv(p, b)); }

inline Fe reduce(std::uint32_t p, std::int64_t v) {
    std::int64_t r = v % std::int64_t(p);
    return Fe(r < 0 ? r + p : r);
}

}  // namespace fp

// Coefficients lowest-degree first; the zero polynomial is the empty vector
// and trailing coefficients are always nonzero.
struct FieldPoly {
    FeVec coeffs;

    FieldPoly() = default;
    explicit FieldPoly(FeVec c) : coeffs(std::move(c)) { trim(); }

    void trim() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }
    bool is_zero() const { return coeffs.empty(); }
    // degree of the zero polynomial is reported as -1
    int degree() const { return int(coeffs.size()) - 1; }
    Fe coeff(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0; }

    Fe eval(std::uint32_t p, Fe x) const {
        Fe acc = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;)
            acc = fp::add(p, fp::mul(p, acc, x), coeffs[i]);
        return acc;
    }

    bool operator==(const FieldPoly& o) const { return coeffs == o.coeffs; }
};

// Row-major dense matrix over GF(p).
struct FieldMatrix {
    std::size_t rows = 0, cols = 0;
    FeVec a;

    FieldMatrix() = default;
    FieldMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    Fe& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    Fe at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static FieldMatrix identity(std::size_t m) {
        FieldMatrix id(m, m);
        for (std::size_t i = 0; i < m; ++i) id.at(i, i) = 1;
        return id;
    }

    FeVec apply(std::uint32_t p, const FeVec& x) const {
        FeVec y(rows, 0);
        for (std::size_t r = 0; r < rows; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t c = 0; c < cols; ++c) {
                acc += std::uint64_t(at(r, c)) * x[c] % p;
            }
            y[r] = Fe(acc % p);
        }
        return y;
    }
};

// Lagrange interpolation through distinct abscissae; the result has degree
// strictly below the number of points.
inline FieldPoly interpolate(std::uint32_t p,
                             const std::vector<std::pair<Fe, Fe>>& points) {
    if (points.empty()) throw Error("interpolate needs at least one point");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first) throw DuplicateAbscissa();

    std::size_t m = points.size();
    FeVec result(m, 0);
    FeVec basis;  // scratch for the Lagrange basis polynomial
    for (std::size_t i = 0; i < m; ++i) {
        basis.assign(1, 1);
        Fe denom = 1;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            // basis *= (x - x_j)
            basis.push_back(0);
            for (std::size_t k = basis.size(); k-- > 1;)
                basis[k] = fp::add(p, fp::mul(p, basis[k], fp::neg(p, points[j].first)),
                                   basis[k - 1]);
            basis[0] = fp::mul(p, basis[0], fp::neg(p, points[j].first));
            denom = fp::mul(p, denom, fp::sub(p, points[i].first, points[j].first));
        }
        Fe scale = fp::div(p, points[i].second, denom);
        for (std::size_t k = 0; k < basis.size(); ++k)
            result[k] = fp::add(p, result[k], fp::mul(p, basis[k], scale));
    }
    return FieldPoly(std::move(result));
}

// Gaussian elimination; returns x with M x = b or throws SingularMatrix.
inline FeVec solve_linear(std::uint32_t p, FieldMatrix m, FeVec b) {
    if (m.rows != m.cols || b.size() != m.rows)
        throw Error("solve_linear expects a square system");
    std::size_t dim = m.rows;
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t pivot = col;
        while (pivot < dim && m.at(pivot, col) == 0) ++pivot;
        if (pivot == dim) throw SingularMatrix();
        if (pivot != col) {
            for (std::size_t c = 0; c < dim; ++c) std::swap(m.at(pivot, c), m.at(col, c));
            std::swap(b[pivot], b[col]);
        }
        Fe invp = fp::inv(p, m.at(col, col));
        for (std::size_t c = col; c < dim; ++c) m.at(col, c) = fp::mul(p, m.at(col, c), invp);
        b[col] = fp::mul(p, b[col], invp);
        for (std::size_t r = 0; r < dim; ++r) {
            if (r == col || m.at(r, col) == 0) continue;
            Fe f = m.at(r, col);
            for (std::size_t c = col; c < dim; ++c)
                m.at(r, c) = fp::sub(p, m.at(r, c), fp::mul(p, f, m.at(col, c)));
            b[r] = fp::sub(p, b[r], fp::mul(p, f, b[col]));
        }
    }
    return b;
}

// Rank via row elimination; used for dual-dimension checks.
inline std::size_t matrix_rank(std::uint32_t p, FieldMatrix m) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows && m.at(pivot, col) == 0) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != rank)
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        Fe invp = fp::inv(p, m.at(rank, col));
        for (std::size_t c = 0; c < m.cols; ++c) m.at(rank, c) = fp::mul(p, m.at(rank, c), invp);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == rank || m.at(r, col) == 0) continue;
            Fe f = m.at(r, col);
            for (std::size_t c = 0; c < m.cols; ++c)
                m.at(r, c) = fp::sub(p, m.at(r, c), fp::mul(p, f, m.at(rank, c)));
        }
        ++rank;
    }
    return rank;
}

// Basis of the null space { x : M x = 0 }, one vector per row of the result.
inline std::vector<FeVec> null_space(std::uint32_t p, FieldMatrix m) {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows && m.at(pivot, col) == 0) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != rank)
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        Fe invp = fp::inv(p, m.at(rank, col));
        for (std::size_t c = 0; c < m.cols; ++c) m.at(rank, c) = fp::mul(p, m.at(rank, c), invp);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == rank || m.at(r, col) == 0) continue;
            Fe f = m.at(r, col);
            for (std::size_t c = 0; c < m.cols; ++c)
                m.at(r, c) = fp::sub(p, m.at(r, c), fp::mul(p, f, m.at(rank, c)));
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<FeVec> basis;
    for (std::size_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        FeVec v(m.cols, 0);
        v[free_col] = 1;
        for (std::size_t r = 0; r < rank; ++r)
            v[pivot_col[r]] = fp::neg(p, m.at(r, free_col));
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve M x = b for a rectangular system; returns any solution (free
// variables set to zero) or nothing when inconsistent.
inline std::optional<FeVec> solve_any(std::uint32_t p, FieldMatrix m, FeVec b) {
    if (b.size() != m.rows) throw Error("solve_any shape mismatch");
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows && m.at(pivot, col) == 0) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != rank) {
            for (std::size_t c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
            std::swap(b[pivot], b[rank]);
        }
        Fe invp = fp::inv(p, m.at(rank, col));
        for (std::size_t c = 0; c < m.cols; ++c) m.at(rank, c) = fp::mul(p, m.at(rank, c), invp);
        b[rank] = fp::mul(p, b[rank], invp);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == rank || m.at(r, col) == 0) continue;
            Fe f = m.at(r, col);
            for (std::size_t c = 0; c < m.cols; ++c)
                m.at(r, c) = fp::sub(p, m.at(r, c), fp::mul(p, f, m.at(rank, c)));
            b[r] = fp::sub(p, b[r], fp::mul(p, f, b[rank]));
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (std::size_t r = rank; r < m.rows; ++r)
        if (b[r] != 0) return std::nullopt;
    FeVec x(m.cols, 0);
    for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = b[r];
    return x;
}

// n x degree_bound matrix with entry (i, j) = i^j for i in 1..n.  Multiplying
// a coefficient vector yields the evaluation vector (q(1), ..., q(n)).
inline FieldMatrix vandermonde(const FieldParams& params, std::size_t degree_bound) {
    if (degree_bound > params.n)
        throw Error("vandermonde degree bound exceeds point count");
    FieldMatrix m(params.n, degree_bound);
    for (std::size_t i = 0; i < params.n; ++i) {
        Fe x = Fe((i + 1) % params.p);
        Fe pw = 1;
        for (std::size_t j = 0; j < degree_bound; ++j) {
            m.at(i, j) = pw;
            pw = fp::mul(params.p, pw, x);
        }
    }
    return m;
}

inline Fe dot(std::uint32_t p, const FeVec& a, const FeVec& b) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::uint64_t(a[i]) * b[i] % p;
    return Fe(acc % p);
}

}  // namespace qss

#endif
