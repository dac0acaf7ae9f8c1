#ifndef QSS_CIRCUIT_HPP
#define QSS_CIRCUIT_HPP

// Gate list over the universal set, plus the line-oriented text format shared
// by the backends and the CLI:
//
//   qupits <m> p <p>
//   X <c> <w> | Z <c> <w> | CADD <b> <src> <dst> | MUL <c> <w> | SWAP <w1> <w2>
//   FOUR <r> <w> | FOURINV <r> <w> | TOFF <w1> <w2> <w3> | MEAS <w>
//   PREP0 <w> | PREPPLUS <w> | DISCARD <w>
//
// Wire indices are 0-based, parameters are decimal residues.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qss/errors.hpp"

namespace qss {

enum class GateKind {
    XShift,      // |a> -> |a+c>
    ZPhase,      // |a> -> w^{ca} |a>
    CAdd,        // |a,b> -> |a, b + scale*a>
    Mul,         // |a> -> |c a>, c != 0
    Swap,
    Fourier,     // |a> -> p^{-1/2} sum_b w^{rab} |b>, 0 < r < p
    FourierInv,
    Toffoli,     // |a,b,c> -> |a,b,c+ab>
    Measure,
    PrepZero,
    PrepPlus,
    Discard,
};

struct GateOp {
    GateKind kind;
    std::uint32_t param = 0;                 // c, b or r where applicable
    std::vector<std::uint32_t> wires;

    static GateOp x(std::uint32_t c, std::uint32_t w) { return {GateKind::XShift, c, {w}}; }
    static GateOp z(std::uint32_t c, std::uint32_t w) { return {GateKind::ZPhase, c, {w}}; }
    static GateOp cadd(std::uint32_t b, std::uint32_t src, std::uint32_t dst) {
        return {GateKind::CAdd, b, {src, dst}};
    }
    static GateOp mul(std::uint32_t c, std::uint32_t w) { return {GateKind::Mul, c, {w}}; }
    static GateOp swap(std::uint32_t a, std::uint32_t b) { return {GateKind::Swap, 0, {a, b}}; }
    static GateOp fourier(std::uint32_t r, std::uint32_t w) { return {GateKind::Fourier, r, {w}}; }
    static GateOp fourier_inv(std::uint32_t r, std::uint32_t w) {
        return {GateKind::FourierInv, r, {w}};
    }
    static GateOp toffoli(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        return {GateKind::Toffoli, 0, {a, b, c}};
    }
    static GateOp measure(std::uint32_t w) { return {GateKind::Measure, 0, {w}}; }
    static GateOp prep_zero(std::uint32_t w) { return {GateKind::PrepZero, 0, {w}}; }
    static GateOp prep_plus(std::uint32_t w) { return {GateKind::PrepPlus, 0, {w}}; }
    static GateOp discard(std::uint32_t w) { return {GateKind::Discard, 0, {w}}; }
};

inline const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::XShift: return "X";
        case GateKind::ZPhase: return "Z";
        case GateKind::CAdd: return "CADD";
        case GateKind::Mul: return "MUL";
        case GateKind::Swap: return "SWAP";
        case GateKind::Fourier: return "FOUR";
        case GateKind::FourierInv: return "FOURINV";
        case GateKind::Toffoli: return "TOFF";
        case GateKind::Measure: return "MEAS";
        case GateKind::PrepZero: return "PREP0";
        case GateKind::PrepPlus: return "PREPPLUS";
        case GateKind::Discard: return "DISCARD";
    }
    return "?";
}

inline bool gate_has_param(GateKind k) {
    switch (k) {
        case GateKind::XShift:
        case GateKind::ZPhase:
        case GateKind::CAdd:
        case GateKind::Mul:
        case GateKind::Fourier:
        case GateKind::FourierInv:
            return true;
        default:
            return false;
    }
}

struct Circuit {
    std::uint32_t num_qupits = 0;
    std::uint32_t p = 0;
    std::vector<GateOp> gates;

    Circuit() = default;
    Circuit(std::uint32_t m, std::uint32_t prime) : num_qupits(m), p(prime) {}

    void push(GateOp g) {
        validate(g);
        gates.push_back(std::move(g));
    }

    void validate(const GateOp& g) const {
        for (auto w : g.wires)
            if (w >= num_qupits) throw Error("gate wire index out of range");
        if (g.kind == GateKind::Mul && g.param % p == 0)
            throw Error("multiplication factor must be nonzero");
        if ((g.kind == GateKind::Fourier || g.kind == GateKind::FourierInv) &&
            g.param % p == 0)
            throw Error("fourier scale must be nonzero");
    }

    void append(const Circuit& other) {
        for (const auto& g : other.gates) push(g);
    }
};

inline std::string circuit_to_text(const Circuit& c) {
    std::ostringstream os;
    os << "qupits " << c.num_qupits << " p " << c.p << "\n";
    for (const auto& g : c.gates) {
        os << gate_name(g.kind);
        if (gate_has_param(g.kind)) os << ' ' << g.param;
        for (auto w : g.wires) os << ' ' << w;
        os << "\n";
    }
    return os.str();
}

inline Circuit circuit_from_text(std::istream& in) {
    std::string tok;
    Circuit c;
    if (!(in >> tok) || tok != "qupits") throw Error("circuit header must start with 'qupits'");
    if (!(in >> c.num_qupits)) throw Error("bad qupit count");
    if (!(in >> tok) || tok != "p") throw Error("circuit header missing 'p'");
    if (!(in >> c.p)) throw Error("bad modulus");
    while (in >> tok) {
        GateOp g;
        std::size_t nwires = 1;
        if (tok == "X") { g.kind = GateKind::XShift; }
        else if (tok == "Z") { g.kind = GateKind::ZPhase; }
        else if (tok == "CADD") { g.kind = GateKind::CAdd; nwires = 2; }
        else if (tok == "MUL") { g.kind = GateKind::Mul; }
        else if (tok == "SWAP") { g.kind = GateKind::Swap; nwires = 2; }
        else if (tok == "FOUR") { g.kind = GateKind::Fourier; }
        else if (tok == "FOURINV") { g.kind = GateKind::FourierInv; }
        else if (tok == "TOFF") { g.kind = GateKind::Toffoli; nwires = 3; }
        else if (tok == "MEAS") { g.kind = GateKind::Measure; }
        else if (tok == "PREP0") { g.kind = GateKind::PrepZero; }
        else if (tok == "PREPPLUS") { g.kind = GateKind::PrepPlus; }
        else if (tok == "DISCARD") { g.kind = GateKind::Discard; }
        else throw Error("unknown gate '" + tok + "'");
        if (gate_has_param(g.kind))
            if (!(in >> g.param)) throw Error("missing gate parameter");
        g.wires.resize(nwires);
        for (auto& w : g.wires)
            if (!(in >> w)) throw Error("missing wire index");
        c.push(std::move(g));
    }
    return c;
}

inline Circuit circuit_from_text(const std::string& text) {
    std::istringstream is(text);
    return circuit_from_text(is);
}

}  // namespace qss

#endif
