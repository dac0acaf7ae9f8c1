#ifndef QSS_PROTOCOLS_ADVERSARIES_HPP
#define QSS_PROTOCOLS_ADVERSARIES_HPP

// The canned adversary library.  Soundness statements are universally
// quantified, so the suite tests the extremal strategies the analysis
// singles out: coin-guessing dealers, Pauli injection on corrupted wires,
// broadcast lies and reconstruction-time garbage.  Strategies are named so
// the CLI can select them.

#include <functional>
#include <map>
#include <string>

#include "qss/engine.hpp"
#include "qss/protocols/classical_vss.hpp"
#include "qss/protocols/subspace.hpp"

namespace qss {

// Random Paulis on every corrupted wire at each challenge round.
inline AdversaryStrategy pauli_injector() {
    AdversaryStrategy a;
    a.name = "pauli-injector";
    a.on_challenge = [](AdversaryContext& ctx, const std::vector<WireId>& owned) {
        for (WireId w : owned)
            ctx.pauli(w, ctx.rng().field_element(ctx.p()), ctx.rng().field_element(ctx.p()));
    };
    return a;
}

// Honest until reconstruction, then random Paulis on the corrupted shares.
inline AdversaryStrategy reconstruction_pauli() {
    AdversaryStrategy a;
    a.name = "reconstruction-pauli";
    a.on_reconstruct = [](AdversaryContext& ctx, const std::vector<WireId>& owned) {
        for (WireId w : owned)
            ctx.pauli(w, ctx.rng().field_element(ctx.p()), ctx.rng().field_element(ctx.p()));
    };
    return a;
}

// Honest until reconstruction, then the corrupted shares are replaced with
// fresh junk basis states.
inline AdversaryStrategy reconstruction_garbage() {
    AdversaryStrategy a;
    a.name = "reconstruction-garbage";
    a.on_reconstruct = [](AdversaryContext& ctx, const std::vector<WireId>& owned) {
        for (WireId w : owned) ctx.substitute_garbage(w);
    };
    return a;
}

// A dealer who mangles a large fraction of the dealt wires; verification
// disqualifies it with overwhelming probability, exercising fallback paths.
inline AdversaryStrategy wrecking_dealer() {
    AdversaryStrategy a;
    a.name = "wrecking-dealer";
    a.on_deal_wires = [](AdversaryContext& ctx, const std::vector<WireId>& wires) {
        for (std::size_t i = 0; i < wires.size(); i += 2)
            ctx.pauli(wires[i], ctx.rng().field_element_nz(ctx.p()), 0);
    };
    return a;
}

// A cheating dealer who shifts one dealt leaf by a basis unit (a distance-one
// deviation that verification must localize).
inline AdversaryStrategy inconsistent_dealer() {
    AdversaryStrategy a;
    a.name = "inconsistent-dealer";
    a.on_deal_wires = [](AdversaryContext& ctx, const std::vector<WireId>& wires) {
        if (wires.empty()) return;
        ctx.pauli(wires[ctx.rng().next_below(wires.size())], 1, 0);
    };
    return a;
}

// Name -> strategy registry for the CLI and sweep harness.
inline const std::map<std::string, std::function<AdversaryStrategy()>>& adversary_registry() {
    static const std::map<std::string, std::function<AdversaryStrategy()>> reg = {
        {"none", [] { return honest_adversary(); }},
        {"pauli-injector", [] { return pauli_injector(); }},
        {"reconstruction-pauli", [] { return reconstruction_pauli(); }},
        {"reconstruction-garbage", [] { return reconstruction_garbage(); }},
        {"broadcast-liar", [] { return broadcast_liar(); }},
        {"inconsistent-dealer", [] { return inconsistent_dealer(); }},
        {"wrecking-dealer", [] { return wrecking_dealer(); }},
        {"guess-ahead", [] { return guess_ahead_dealer(3); }},
        {"guess-ahead-resharer", [] { return guess_ahead_resharer(2, 1); }},
        // marker strategy: mechanics honest, but the dealt state contradicts
        // the claimed known state (handled by the protocol runners)
        {"claim-liar",
         [] {
             AdversaryStrategy a;
             a.name = "claim-liar";
             return a;
         }},
    };
    return reg;
}

inline AdversaryStrategy adversary_by_name(const std::string& name) {
    auto it = adversary_registry().find(name);
    if (it == adversary_registry().end()) throw Error("unknown adversary '" + name + "'");
    return it->second();
}

}  // namespace qss

#endif
