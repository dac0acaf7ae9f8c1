#ifndef QSS_PROTOCOLS_MPQC_HPP
#define QSS_PROTOCOLS_MPQC_HPP

// Multi-party evaluation of a shared circuit with n = 6t+1.  Every player
// shares its input through the top-level sharing protocol; a caught dealer
// is replaced by a proven-zero sharing dealt by the next player still
// trusted.  Gates run through the transversal gadgets, Toffoli targets
// drawing verified high-degree ancillas shared during the input phase.
// Finally all players send their components of output wire i to player i,
// who decodes and falls back to |0> when decoding fails.

#include <optional>

#include "qss/protocols/toplevel.hpp"

namespace qss {

struct MpqcParams {
    FieldParams field;
    std::uint32_t t = 0;
    std::uint32_t k = 1;
    BackendKind backend = BackendKind::Share;
    CoinMode coins = CoinMode::IdealVss;
};

struct MpqcResult {
    std::shared_ptr<QuantumMemory> mem;
    GadgetCodes codes;
    PlayerSet players;
    Transcript tr;
    std::vector<std::optional<WireId>> outputs;  // one per player
    std::vector<bool> substituted_zero;          // output decode failures
    std::vector<bool> input_replaced;            // caught input dealers
    bool ok = false;
};

// Ideal evaluation: the trusted party applies the circuit directly to the
// unencoded inputs, substituting |0> for refused ones.
struct IdealMpqcResult {
    std::unique_ptr<QuantumMemory> mem;
    std::vector<WireId> outputs;
};

inline IdealMpqcResult ideal_mpqc(BackendKind backend, const Circuit& circuit,
                                  const std::vector<ShareRequest>& inputs,
                                  const std::vector<bool>& refuse, std::uint64_t seed) {
    IdealMpqcResult res;
    res.mem = std::make_unique<QuantumMemory>(backend, circuit.p);
    CounterRng rng(seed, 40);
    std::vector<WireId> wires;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        bool refused = i < refuse.size() && refuse[i];
        WireId w;
        if (refused) {
            w = res.mem->alloc_zero(rng);
        } else if (inputs[i].claim == KnownState::Plus || inputs[i].fourier_input) {
            w = res.mem->alloc_plus(rng);
        } else {
            w = res.mem->alloc_zero(rng);
            if (inputs[i].basis_value) res.mem->x(w, inputs[i].basis_value, rng);
        }
        wires.push_back(w);
    }
    for (const GateOp& g : circuit.gates) {
        std::vector<WireId> ws;
        for (auto w : g.wires) ws.push_back(wires[w]);
        res.mem->apply_gate(g, ws, rng);
    }
    res.outputs = wires;
    return res;
}

inline MpqcResult mpqc_run(const MpqcParams& params, const Circuit& circuit,
                           const std::vector<ShareRequest>& inputs,
                           const PlayerSet& players, const AdversaryStrategy& adv,
                           std::uint64_t seed) {
    const std::uint32_t n = params.field.n;
    if (n != 6 * params.t + 1) throw Error("circuit evaluation expects n = 6t+1");
    if (circuit.num_qupits != n || circuit.p != params.field.p)
        throw Error("circuit shape must match the player roster");
    if (inputs.size() != n) throw Error("one input per player required");

    MpqcResult res;
    res.codes = GadgetCodes(params.field, 2 * params.t);
    res.players = players;
    res.substituted_zero.assign(n, false);
    res.input_replaced.assign(n, false);
    res.mem = std::make_shared<QuantumMemory>(params.backend, params.field.p);
    CounterRng rng(seed, 60);
    CounterRng adv_rng(seed, 61);

    VqssParams vp;
    vp.field = params.field;
    vp.t = params.t;
    vp.k = params.k;
    vp.backend = params.backend;
    vp.coins = params.coins;

    // one top-level sharing with dealer fallback
    auto share_one = [&](ShareRequest req, std::uint32_t dealer, bool prove_zero,
                         std::uint32_t degree, std::uint64_t subseed,
                         bool* replaced) -> std::optional<EncodedWire> {
        for (std::uint32_t attempt = 0; attempt < n; ++attempt) {
            vp.dealer = dealer;
            ShareRequest r = (attempt == 0) ? req : ShareRequest::proven_zero();
            TopLevelResult one =
                top_level_share(vp, r, players, adv, subseed + 2654435761ull * attempt,
                                (attempt > 0) || prove_zero, degree, res.mem);
            res.tr.append(one.tr);
            if (one.passed) {
                if (replaced) *replaced = attempt > 0;
                for (std::size_t i = 0; i < n; ++i)
                    res.mem->set_owner(one.shares.comps[i], std::uint32_t(i));
                return one.shares;
            }
            res.tr.disqualify(dealer);
            dealer = (dealer + 1) % n;  // an honest player always succeeds
        }
        return std::nullopt;
    };

    // --- input phase ----------------------------------------------------------
    std::vector<EncodedWire> wires;
    for (std::uint32_t i = 0; i < n; ++i) {
        bool replaced = false;
        auto enc = share_one(inputs[i], i, false, 0, seed + 1000 + i, &replaced);
        if (!enc) return res;
        res.input_replaced[i] = replaced;
        wires.push_back(*enc);
    }
    // verified high-degree zero ancillas, one per Toffoli in the circuit
    std::vector<EncodedWire> toffoli_pool;
    std::uint32_t ancilla_dealer = 0;
    std::uint64_t anc_seed = seed + 5000;
    for (const GateOp& g : circuit.gates) {
        if (g.kind != GateKind::Toffoli) continue;
        auto enc = share_one(ShareRequest::proven_zero(), ancilla_dealer, true,
                             res.codes.high.delta(), anc_seed, nullptr);
        if (!enc) return res;
        toffoli_pool.push_back(*enc);
        ancilla_dealer = (ancilla_dealer + 1) % n;
        anc_seed += 7919;
    }

    // --- computation phase ------------------------------------------------------
    std::size_t next_toffoli = 0;
    for (const GateOp& g : circuit.gates) {
        switch (g.kind) {
            case GateKind::XShift:
                logical_x(*res.mem, res.codes, wires[g.wires[0]], g.param, rng);
                break;
            case GateKind::ZPhase:
                logical_z(*res.mem, res.codes, wires[g.wires[0]], g.param, rng);
                break;
            case GateKind::Mul:
                logical_mul(*res.mem, res.codes, wires[g.wires[0]], g.param, rng);
                break;
            case GateKind::Swap:
                logical_swap(*res.mem, wires[g.wires[0]], wires[g.wires[1]], rng);
                break;
            case GateKind::CAdd:
                logical_cadd(*res.mem, g.param, wires[g.wires[0]], wires[g.wires[1]], rng);
                break;
            case GateKind::Fourier:
            case GateKind::FourierInv: {
                EncodedWire& e = wires[g.wires[0]];
                scaled_fourier(*res.mem, res.codes, e, g.kind == GateKind::FourierInv, rng);
                auto bc = reduce_encoding(*res.mem, res.codes, e, players, adv, rng,
                                          adv_rng, &res.tr);
                if (!bc.ok) return res;
                break;
            }
            case GateKind::Toffoli: {
                auto bc = logical_toffoli(*res.mem, res.codes, wires[g.wires[0]],
                                          wires[g.wires[1]], wires[g.wires[2]], players,
                                          adv, rng, adv_rng, &res.tr,
                                          &toffoli_pool[next_toffoli++]);
                if (!bc.ok) return res;
                break;
            }
            case GateKind::Measure: {
                auto v = logical_measure(*res.mem, res.codes, wires[g.wires[0]], players,
                                         adv, rng, adv_rng, &res.tr);
                if (!v) return res;
                // the measured wire collapses to a fresh basis-state sharing
                break;
            }
            case GateKind::Discard:
                for (WireId w : wires[g.wires[0]].comps) res.mem->discard(w, rng);
                break;
            case GateKind::PrepZero:
            case GateKind::PrepPlus:
                throw Error("circuit preparations must enter through the input phase");
        }
    }

    // --- output phase -------------------------------------------------------------
    for (std::uint32_t i = 0; i < n; ++i) {
        EncodedWire& e = wires[i];
        if (adv.on_reconstruct) {
            std::vector<WireId> owned;
            for (WireId w : e.comps)
                if (res.mem->alive(w) && players.is_cheater(res.mem->owner(w)))
                    owned.push_back(w);
            AdversaryContext ctx(*res.mem, players, adv_rng.derive(700 + i));
            adv.on_reconstruct(ctx, owned);
        }
        for (WireId w : e.comps)
            if (res.mem->alive(w)) res.mem->set_owner(w, i);
        auto out = decode_logical(*res.mem, res.codes, e, params.t, rng);
        if (!out) {
            // decoding failed: player i outputs |0>
            res.substituted_zero[i] = true;
            out = res.mem->alloc_zero(rng, i);
        }
        res.mem->set_owner(*out, i);
        res.outputs.push_back(out);
    }
    res.ok = true;
    return res;
}

}  // namespace qss

#endif
