#ifndef QSS_PROTOCOLS_TOPLEVEL_HPP
#define QSS_PROTOCOLS_TOPLEVEL_HPP

// Top-level sharing: the dealer two-level-shares the secret together with
// delta proven-plus and n-delta-1 proven-zero sharings, the players apply
// the Vandermonde relabeling across the trees (a distributed run of the
// encoding circuit), and every player receives and decodes all shares of its
// own component.  After a passing run each honest player holds one qupit of
// an encoding of the secret, clean outside the corrupted set.
//
// Also provides the trusted-third-party reference protocols (ideal secret
// sharing, ideal two-phase sharing, ideal circuit evaluation) and the
// simulator that runs a real adversary against the ideal sharing.

#include <optional>

#include "qss/protocols/gadgets.hpp"
#include "qss/protocols/vqss.hpp"

namespace qss {

struct TopLevelResult {
    std::shared_ptr<QuantumMemory> mem;
    GadgetCodes codes;
    PlayerSet players;
    AccusationState acc;
    bool passed = false;
    EncodedWire shares;  // component i held by player i
    Transcript tr;
    CounterRng rng, adv_rng;
};

// Roll a verified tree into the single component qupit its owner keeps.
inline std::optional<WireId> rollback_tree(TwoLevelRun& run, std::size_t tree_index,
                                           std::uint32_t receiver,
                                           const AdversaryStrategy& adv) {
    return vqss_reconstruct(run, tree_index, receiver, adv);
}

inline TopLevelResult top_level_share(const VqssParams& params, const ShareRequest& secret,
                                      const PlayerSet& players,
                                      const AdversaryStrategy& adv, std::uint64_t seed,
                                      bool prove_zero_secret = false,
                                      std::uint32_t degree = 0,
                                      std::shared_ptr<QuantumMemory> ext_mem = nullptr) {
    const std::uint32_t n = params.field.n;
    const std::uint32_t delta = 2 * params.t;
    if (degree == 0) degree = delta;  // output code degree; delta' for ancillas

    // the n sharings: the secret, degree proven-plus, n-degree-1 proven-zero
    std::vector<ShareRequest> reqs;
    ShareRequest first = secret;
    if (prove_zero_secret) first.claim = KnownState::Zero;
    reqs.push_back(first);
    for (std::uint32_t i = 0; i < degree; ++i) reqs.push_back(ShareRequest::proven_plus());
    for (std::uint32_t i = degree + 1; i < n; ++i) reqs.push_back(ShareRequest::proven_zero());

    TwoLevelRun run =
        batched_share_and_verify(params, reqs, players, adv, seed, std::move(ext_mem));

    TopLevelResult res;
    res.codes = GadgetCodes(params.field, delta);
    res.players = players;
    res.acc = run.acc;
    res.passed = run.passed;
    res.tr = std::move(run.tr);
    if (!run.passed) {
        res.mem = std::move(run.mem);
        res.rng = run.rng;
        res.adv_rng = run.adv_rng;
        return res;
    }

    // (computation) the Vandermonde relabeling, applied leaf-wise across trees
    FieldMatrix vm = vandermonde(params.field, params.field.n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<WireId> column;
            for (std::size_t tree = 0; tree < n; ++tree)
                column.push_back(run.data[tree].w[i][j]);
            apply_linear_map(*run.mem, column, vm, run.rng);
        }
    res.tr.note("vandermonde");

    // (roll back) all players send their shares of tree i to player i, who
    // decodes its component
    res.shares.degree = degree;
    bool ok = true;
    for (std::uint32_t i = 0; i < n; ++i) {
        auto comp = rollback_tree(run, i, i, adv);
        if (!comp) {
            ok = false;
            break;
        }
        res.shares.comps.push_back(*comp);
    }
    res.passed = ok;
    res.acc = run.acc;
    res.mem = std::move(run.mem);
    res.rng = run.rng;
    res.adv_rng = run.adv_rng;
    return res;
}

// Honest final reconstruction: everyone sends its component to the receiver.
inline std::optional<WireId> top_level_reconstruct(TopLevelResult& res,
                                                   std::uint32_t receiver,
                                                   const AdversaryStrategy& adv) {
    if (!res.passed) return std::nullopt;
    QuantumMemory& mem = *res.mem;
    if (adv.on_reconstruct) {
        std::vector<WireId> owned;
        for (WireId w : res.shares.comps)
            if (res.players.is_cheater(mem.owner(w))) owned.push_back(w);
        AdversaryContext ctx(mem, res.players, res.adv_rng.derive(900));
        adv.on_reconstruct(ctx, owned);
    }
    for (WireId w : res.shares.comps) mem.set_owner(w, receiver);
    auto out = decode_logical(mem, res.codes, res.shares, res.players.t, res.rng);
    if (out) mem.set_owner(*out, receiver);
    return out;
}

// --- ideal (trusted third party) reference protocols ---------------------------

// One-phase ideal secret sharing: the TTP encodes the dealt qupit and hands
// component i to player i.
inline EncodedWire ideal_secret_sharing(QuantumMemory& mem, const GadgetCodes& codes,
                                        WireId secret, CounterRng& rng) {
    EncodedWire enc = encode_logical(mem, codes, secret, codes.low.delta(), rng);
    for (std::size_t i = 0; i < enc.comps.size(); ++i)
        mem.set_owner(enc.comps[i], std::uint32_t(i));
    return enc;
}

// Two-phase ideal sharing: the TTP keeps the qupit and forwards it to the
// reconstructor later.  Refusing dealers are flagged.
struct IdealVqss {
    bool dealer_ok = false;
    std::optional<WireId> stored;

    static IdealVqss share(std::optional<WireId> secret) {
        IdealVqss s;
        s.dealer_ok = secret.has_value();
        s.stored = secret;
        return s;
    }
    std::optional<WireId> reconstruct() const { return dealer_ok ? stored : std::nullopt; }
};

// --- simulator ------------------------------------------------------------------

// Runs a real two-level sharing against the ideal model: for a cheating
// dealer the simulated honest players extract the committed qupit by ideal
// interpolation and forward it to the TTP; for an honest dealer the
// simulation shares |0> and later swaps the real secret in through the same
// interpolation circuit.
struct SimulatedSharing {
    TwoLevelRun run;
    IdealVqss ttp;
    bool dealer_honest = true;
    SupportSet honest_positions;
};

inline SimulatedSharing simulate_sharing(const VqssParams& params, const ShareRequest& real,
                                         const PlayerSet& players,
                                         const AdversaryStrategy& adv, std::uint64_t seed) {
    SimulatedSharing sim;
    sim.dealer_honest = !players.is_cheater(0);
    ShareRequest dummy = sim.dealer_honest ? ShareRequest::basis(0) : real;
    sim.run = vqss_share_and_verify(params, dummy, players, adv, seed);
    if (!sim.run.passed) {
        sim.ttp = IdealVqss::share(std::nullopt);  // dealer caught
        return sim;
    }
    for (std::size_t i = 0; i < params.field.n; ++i)
        if (!players.is_cheater(i)) sim.honest_positions.insert(i);

    if (!sim.dealer_honest) {
        // extract the committed system from honest branches and hand it over
        QuantumMemory& mem = *sim.run.mem;
        std::vector<WireId> branch_out;
        SupportSet chosen;
        for (std::size_t i : sim.honest_positions) {
            if (chosen.size() == sim.run.code.delta() + 1) break;
            BlockDecodeResult r = decode_block(mem, sim.run.code, sim.run.data[0].w[i],
                                               sim.run.acc.b_branch[i], params.t, sim.run.rng);
            if (!r.ok) continue;
            branch_out.push_back(r.output);
            chosen.insert(i);
        }
        if (chosen.size() < sim.run.code.delta() + 1) {
            sim.ttp = IdealVqss::share(std::nullopt);
            return sim;
        }
        // top-level extraction over the chosen branches
        std::vector<std::size_t> positions(chosen.begin(), chosen.end());
        FieldMatrix to_coeffs = sim.run.code.interpolation_matrix(positions);
        apply_linear_map(mem, branch_out, to_coeffs, sim.run.rng);
        WireId s = mem.alloc_zero(sim.run.rng);
        mem.swap_wires(s, branch_out[0], sim.run.rng);
        sim.ttp = IdealVqss::share(s);
        return sim;
    }
    // honest dealer: he sends the true secret himself
    QuantumMemory& mem = *sim.run.mem;
    WireId s;
    if (real.claim == KnownState::Plus || real.fourier_input)
        s = mem.alloc_plus(sim.run.rng);
    else {
        s = mem.alloc_zero(sim.run.rng);
        if (real.basis_value) mem.x(s, real.basis_value, sim.run.rng);
    }
    sim.ttp = IdealVqss::share(s);
    return sim;
}

// Reconstruction phase of the simulation: a cheating receiver gets the TTP
// system embedded back into the simulated shares; an honest receiver gets
// the TTP system directly and the corrupted shares are discarded.
inline std::optional<WireId> simulate_reconstruction(SimulatedSharing& sim,
                                                     std::uint32_t receiver,
                                                     const AdversaryStrategy& adv) {
    auto from_ttp = sim.ttp.reconstruct();
    if (!from_ttp) return std::nullopt;
    QuantumMemory& mem = *sim.run.mem;
    if (!sim.run.players.is_cheater(receiver))
        return from_ttp;  // honest receiver: the TTP hands the system over

    // cheating receiver: swap the secret into the dummy sharing by running
    // the interpolation forwards, exchanging, and running it backwards
    std::vector<std::size_t> positions(sim.honest_positions.begin(),
                                       sim.honest_positions.end());
    positions.resize(sim.run.code.delta() + 1);
    // branch-extract the dummy |0>, swap the real system in, re-embed
    std::vector<WireId> branch_out;
    for (std::size_t i : positions) {
        BlockDecodeResult r = decode_block(mem, sim.run.code, sim.run.data[0].w[i],
                                           sim.run.acc.b_branch[i], sim.run.players.t,
                                           sim.run.rng);
        if (!r.ok) return std::nullopt;
        branch_out.push_back(r.output);
    }
    FieldMatrix to_coeffs = sim.run.code.interpolation_matrix(positions);
    apply_linear_map(mem, branch_out, to_coeffs, sim.run.rng);
    mem.swap_wires(branch_out[0], *from_ttp, sim.run.rng);
    // rebuild evaluations and re-encode the branches for the receiver
    FieldMatrix to_values(sim.run.code.delta() + 1, sim.run.code.delta() + 1);
    for (std::size_t r = 0; r < positions.size(); ++r) {
        Fe x = Fe((positions[r] + 1) % mem.p());
        Fe pw = 1;
        for (std::size_t jc = 0; jc <= sim.run.code.delta(); ++jc) {
            to_values.at(r, jc) = pw;
            pw = fp::mul(mem.p(), pw, x);
        }
    }
    apply_linear_map(mem, branch_out, to_values, sim.run.rng);
    std::vector<WireId> rebuilt;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        auto enc = encode_state(mem, sim.run.code, branch_out[k], sim.run.rng, receiver);
        for (WireId w : enc) rebuilt.push_back(w);
    }
    for (WireId w : rebuilt) mem.set_owner(w, receiver);
    // hand everything the cheater can see over (share wires of the tree)
    for (auto& branch : sim.run.data[0].w)
        for (WireId w : branch)
            if (mem.alive(w)) mem.set_owner(w, receiver);
    return std::nullopt;  // nothing flows to honest parties in this case
}

}  // namespace qss

#endif
