#ifndef QSS_PAULI_HPP
#define QSS_PAULI_HPP

// Qupit Pauli operators w^phase X^x Z^z with X|a> = |a+1> and Z|a> = w^a |a>.
// Under these definitions Z^b X^a = w^{ab} X^a Z^b, so composing e1 after e2
// adds the commutation count z1.x2 to the phase exponent.

#include <cstdint>
#include <set>
#include <vector>

#include "qss/field.hpp"

namespace qss {

struct PauliOp {
    std::uint32_t p = 0;
    FeVec x;
    FeVec z;
    Fe phase = 0;  // exponent of w

    PauliOp() = default;
    PauliOp(std::uint32_t prime, std::size_t n) : p(prime), x(n, 0), z(n, 0) {}
    PauliOp(std::uint32_t prime, FeVec xv, FeVec zv, Fe ph = 0)
        : p(prime), x(std::move(xv)), z(std::move(zv)), phase(ph) {
        if (x.size() != z.size()) throw Error("pauli x/z length mismatch");
    }

    std::size_t n() const { return x.size(); }

    bool is_identity() const {
        for (std::size_t i = 0; i < n(); ++i)
            if (x[i] || z[i]) return false;
        return true;
    }

    std::set<std::size_t> support() const {
        std::set<std::size_t> s;
        for (std::size_t i = 0; i < n(); ++i)
            if (x[i] || z[i]) s.insert(i);
        return s;
    }

    std::size_t weight() const { return support().size(); }

    PauliOp inverse() const {
        PauliOp r(p, n());
        for (std::size_t i = 0; i < n(); ++i) {
            r.x[i] = fp::neg(p, x[i]);
            r.z[i] = fp::neg(p, z[i]);
        }
        // X^-x Z^-z = w^{-x.z} (X^x Z^z)^{-1} up to the recorded phase
        r.phase = fp::sub(p, fp::neg(p, phase), dot(p, r.z, x));
        return r;
    }

    bool operator==(const PauliOp& o) const {
        return p == o.p && x == o.x && z == o.z && phase == o.phase;
    }
};

// e1 applied after e2.
inline PauliOp pauli_compose(const PauliOp& e1, const PauliOp& e2) {
    if (e1.p != e2.p || e1.n() != e2.n())
        throw Error("pauli_compose requires matching p and width");
    std::uint32_t p = e1.p;
    PauliOp r(p, e1.n());
    for (std::size_t i = 0; i < e1.n(); ++i) {
        r.x[i] = fp::add(p, e1.x[i], e2.x[i]);
        r.z[i] = fp::add(p, e1.z[i], e2.z[i]);
    }
    r.phase = fp::add(p, fp::add(p, e1.phase, e2.phase), dot(p, e1.z, e2.x));
    return r;
}

// e^k with the reordering phase w^{x.z * k(k-1)/2}.
inline PauliOp pauli_power(const PauliOp& e, Fe k) {
    std::uint32_t p = e.p;
    PauliOp r(p, e.n());
    for (std::size_t i = 0; i < e.n(); ++i) {
        r.x[i] = fp::mul(p, e.x[i], k);
        r.z[i] = fp::mul(p, e.z[i], k);
    }
    Fe tri = fp::mul(p, k, fp::mul(p, fp::sub(p, k, 1 % p), fp::inv(p, 2 % p)));
    r.phase = fp::add(p, fp::mul(p, e.phase, k), fp::mul(p, dot(p, e.x, e.z), tri));
    return r;
}

// Symplectic product: 0 iff the two operators commute.
inline Fe pauli_symplectic(const PauliOp& a, const PauliOp& b) {
    return fp::sub(a.p, dot(a.p, a.z, b.x), dot(a.p, a.x, b.z));
}

}  // namespace qss

#endif
