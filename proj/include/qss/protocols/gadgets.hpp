#ifndef QSS_PROTOCOLS_GADGETS_HPP
#define QSS_PROTOCOLS_GADGETS_HPP

// Fault-tolerant gate gadgets on encoded qupits.  Linear gates, shifts,
// phases and multiplications act component-wise.  The d-scaled transversal
// Fourier exchanges the degree-delta and degree-delta' encodings while
// applying a logical Fourier transform; with n = 2 delta + 1 the two codes
// coincide and the Fourier becomes fully transversal.  The expansion gadget
// teleports a low-degree encoding onto a high-degree ancilla through a
// public measurement decoded against the scaled dual code, and degree
// reduction is that gadget conjugated by scaled Fouriers.  Toffoli acts
// component-wise once the target has been expanded.

#include <optional>

#include "qss/engine.hpp"
#include "qss/qops.hpp"

namespace qss {

// A logical qupit spread component-wise over n wires, encoded with the
// polynomial code of the recorded degree.
struct EncodedWire {
    std::vector<WireId> comps;
    std::uint32_t degree = 0;
};

// Both polynomial codes over one parameter set, plus the scaling vector.
struct GadgetCodes {
    CssCode low;   // degree delta
    CssCode high;  // degree delta' = n - delta - 1
    FeVec d;

    GadgetCodes() = default;
    GadgetCodes(const FieldParams& params, std::uint32_t delta)
        : low(params, delta), high(params, params.n - delta - 1), d(scaling_vector(params)) {}

    std::uint32_t n() const { return low.params().n; }
    std::uint32_t p() const { return low.p(); }
    const CssCode& code_for(std::uint32_t degree) const {
        if (degree == low.delta()) return low;
        if (degree == high.delta()) return high;
        throw Error("no code with the requested degree");
    }
};

inline EncodedWire encode_logical(QuantumMemory& mem, const GadgetCodes& codes,
                                  WireId input, std::uint32_t degree, CounterRng& rng) {
    return {encode_state(mem, codes.code_for(degree), input, rng), degree};
}

// --- transversal operations ---------------------------------------------------

inline void logical_x(QuantumMemory& mem, const GadgetCodes& codes, EncodedWire& e, Fe c,
                      CounterRng& rng) {
    (void)codes;
    for (WireId w : e.comps) mem.x(w, c, rng);
}

// Z^c on the logical qupit is Z^{c d_i} component-wise, for either degree.
inline void logical_z(QuantumMemory& mem, const GadgetCodes& codes, EncodedWire& e, Fe c,
                      CounterRng& rng) {
    for (std::size_t i = 0; i < e.comps.size(); ++i)
        mem.z(e.comps[i], fp::mul(codes.p(), c, codes.d[i]), rng);
}

inline void logical_mul(QuantumMemory& mem, const GadgetCodes& codes, EncodedWire& e, Fe c,
                        CounterRng& rng) {
    (void)codes;
    for (WireId w : e.comps) mem.mul(w, c, rng);
}

inline void logical_swap(QuantumMemory& mem, EncodedWire& a, EncodedWire& b,
                         CounterRng& rng) {
    if (a.degree != b.degree) throw Error("swap needs matching encodings");
    for (std::size_t i = 0; i < a.comps.size(); ++i)
        mem.swap_wires(a.comps[i], b.comps[i], rng);
}

// Controlled addition; the target degree must dominate the source degree so
// the sum stays inside the target's code family.
inline void logical_cadd(QuantumMemory& mem, Fe b, const EncodedWire& src, EncodedWire& dst,
                         CounterRng& rng) {
    if (src.degree > dst.degree) throw Error("cadd source degree exceeds target degree");
    for (std::size_t i = 0; i < src.comps.size(); ++i)
        mem.cadd(b, src.comps[i], dst.comps[i], rng);
}

// d-scaled transversal Fourier: degree flips to n-1-degree, and the logical
// content picks up a Fourier transform (inverse variant available).
inline void scaled_fourier(QuantumMemory& mem, const GadgetCodes& codes, EncodedWire& e,
                           bool inverse, CounterRng& rng) {
    for (std::size_t i = 0; i < e.comps.size(); ++i) {
        if (!inverse)
            mem.fourier(e.comps[i], codes.d[i], rng);
        else
            mem.fourier_inv(e.comps[i], codes.d[i], rng);
    }
    e.degree = codes.n() - 1 - e.degree;
}

// --- public-measurement gadgets ------------------------------------------------

struct GadgetBroadcast {
    Codeword word;      // announced component measurements
    Fe decoded = 0;     // the decoded logical value b
    bool ok = false;
};

// Expansion: teleport a degree-delta encoding onto a degree-delta' ancilla.
// The source is consumed.  Component owners broadcast their Fourier-frame
// measurement; everyone decodes against the scaled dual code W^{delta'} and
// the known phase w^{ab} is repaired by a scaled conditional phase shift.
inline GadgetBroadcast expand_encoding(QuantumMemory& mem, const GadgetCodes& codes,
                                       EncodedWire& e, const PlayerSet& players,
                                       const AdversaryStrategy& adv, CounterRng& rng,
                                       CounterRng& adv_rng, Transcript* tr = nullptr,
                                       EncodedWire* preshared = nullptr) {
    if (e.degree != codes.low.delta()) throw Error("expansion expects a low-degree input");
    const std::uint32_t n = codes.n();
    const std::uint32_t p = codes.p();

    EncodedWire anc;
    if (preshared) {
        if (preshared->degree != codes.high.delta())
            throw Error("preshared expansion ancilla has the wrong degree");
        anc = *preshared;
        preshared->comps.clear();
    } else {
        WireId zero = mem.alloc_zero(rng);
        anc = encode_logical(mem, codes, zero, codes.high.delta(), rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!preshared) mem.set_owner(anc.comps[i], mem.owner(e.comps[i]));
        mem.cadd(1, e.comps[i], anc.comps[i], rng);
    }

    GadgetBroadcast bc;
    bc.word.assign(n, 0);
    if (mem.kind() == BackendKind::Share) {
        // classically the Fourier-frame measurement is a uniform scaled
        // codeword carrying no data; synthesize it and discard the source
        FeVec coeffs(codes.low.delta() + 1);
        for (auto& c : coeffs) c = rng.field_element(p);
        FieldPoly t(std::move(coeffs));
        for (std::size_t i = 0; i < n; ++i) {
            bc.word[i] = fp::mul(p, codes.d[i], t.eval(p, Fe((i + 1) % p)));
            mem.discard(e.comps[i], rng);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            mem.fourier(e.comps[i], 1, rng);
            bc.word[i] = mem.measure(e.comps[i], rng);
            mem.discard(e.comps[i], rng);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (players.is_cheater(mem.owner(anc.comps[i])) && adv.on_broadcast)
            bc.word[i] = adv.on_broadcast(mem.owner(anc.comps[i]), bc.word[i], adv_rng) % p;
    if (tr) tr->broadcast(-1, "expansion-frame", bc.word);

    DecodeOutcome out = rs_decode(codes.low.w_code(), bc.word);
    if (out.status != DecodeStatus::Decoded) return bc;  // ok stays false
    bc.decoded = out.secret;
    bc.ok = true;
    // conditional phase shift with scaling factor -b
    for (std::size_t i = 0; i < n; ++i)
        mem.z(anc.comps[i], fp::neg(p, fp::mul(p, bc.decoded, codes.d[i])), rng);
    e = anc;
    return bc;
}

// Degree reduction: high-degree in, low-degree out, realized as the
// expansion gadget conjugated by scaled Fouriers with a final negation to
// cancel the double transform.
inline GadgetBroadcast reduce_encoding(QuantumMemory& mem, const GadgetCodes& codes,
                                       EncodedWire& e, const PlayerSet& players,
                                       const AdversaryStrategy& adv, CounterRng& rng,
                                       CounterRng& adv_rng, Transcript* tr = nullptr) {
    if (e.degree != codes.high.delta()) throw Error("reduction expects a high-degree input");
    if (mem.kind() == BackendKind::Share)
        throw UnsupportedGate("share", "degree reduction");
    scaled_fourier(mem, codes, e, false, rng);
    GadgetBroadcast bc = expand_encoding(mem, codes, e, players, adv, rng, adv_rng, tr);
    if (!bc.ok) return bc;
    scaled_fourier(mem, codes, e, false, rng);
    logical_mul(mem, codes, e, Fe(codes.p() - 1), rng);
    return bc;
}

// Toffoli: expand the target, then act component-wise.  Works on classical
// share data (and on any backend when the controls are classical).
inline GadgetBroadcast logical_toffoli(QuantumMemory& mem, const GadgetCodes& codes,
                                       const EncodedWire& a, const EncodedWire& b,
                                       EncodedWire& c, const PlayerSet& players,
                                       const AdversaryStrategy& adv, CounterRng& rng,
                                       CounterRng& adv_rng, Transcript* tr = nullptr,
                                       EncodedWire* preshared = nullptr) {
    if (a.degree != codes.low.delta() || b.degree != codes.low.delta())
        throw Error("toffoli controls must be low-degree encodings");
    GadgetBroadcast bc;
    bc.ok = true;
    if (c.degree == codes.low.delta())
        bc = expand_encoding(mem, codes, c, players, adv, rng, adv_rng, tr, preshared);
    if (!bc.ok) return bc;
    for (std::size_t i = 0; i < codes.n(); ++i)
        mem.toffoli(a.comps[i], b.comps[i], c.comps[i], rng);
    return bc;
}

// Transversal logical measurement: measure every component, broadcast, and
// decode the announced word classically.
inline std::optional<Fe> logical_measure(QuantumMemory& mem, const GadgetCodes& codes,
                                         const EncodedWire& e, const PlayerSet& players,
                                         const AdversaryStrategy& adv, CounterRng& rng,
                                         CounterRng& adv_rng, Transcript* tr = nullptr) {
    const std::uint32_t p = codes.p();
    Codeword word(codes.n(), 0);
    for (std::size_t i = 0; i < codes.n(); ++i) {
        word[i] = mem.measure(e.comps[i], rng);
        if (players.is_cheater(mem.owner(e.comps[i])) && adv.on_broadcast)
            word[i] = adv.on_broadcast(mem.owner(e.comps[i]), word[i], adv_rng) % p;
    }
    if (tr) tr->broadcast(-1, "logical-measure", word);
    const RsCode& rs = e.degree == codes.low.delta() ? codes.low.v_code()
                                                     : codes.high.v_code();
    DecodeOutcome out = rs_decode(rs, word);
    if (out.status != DecodeStatus::Decoded) return std::nullopt;
    return out.secret;
}

// Honest full decoding of an encoded wire (error-correct and extract).
inline std::optional<WireId> decode_logical(QuantumMemory& mem, const GadgetCodes& codes,
                                            const EncodedWire& e, std::size_t max_errors,
                                            CounterRng& rng) {
    BlockDecodeResult r =
        decode_block(mem, codes.code_for(e.degree), e.comps, {}, max_errors, rng);
    if (!r.ok) return std::nullopt;
    return r.output;
}

}  // namespace qss

#endif
