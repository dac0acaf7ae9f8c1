#ifndef QSS_PROTOCOLS_VQSS_HPP
#define QSS_PROTOCOLS_VQSS_HPP

// Two-level verifiable quantum secret sharing.  The dealer encodes the
// secret, every player re-encodes the component it received, and cut-and-
// choose challenges in the computational basis followed by challenges in the
// Fourier basis certify that measuring the surviving tree in either basis
// would produce a consistent two-level tree.  Reconstruction decodes each
// branch against its accusation set and interpolates the surviving branch
// outputs.
//
// Two verification schedules are provided: the literal one with (k+1)^2
// systems, and the batched one that certifies any number of same-dealer
// trees with 2k ancilla trees.  A dealer can additionally prove that a tree
// carries exactly |0> (zero-top masks in the computational challenges) or
// exactly the uniform superposition (zero-top masks in the Fourier
// challenges); both proofs add a public interpolates-to-zero check.

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>

#include "qss/engine.hpp"
#include "qss/qops.hpp"
#include "qss/sharetree.hpp"

namespace qss {

struct TreeWires {
    std::vector<std::vector<WireId>> w;  // w[branch][leaf]
    std::uint32_t n() const { return std::uint32_t(w.size()); }
};

enum class KnownState { Generic, Zero, Plus };

// What the dealer shares: a basis value, the Fourier |0> state, or a
// known-state claim that changes the ancilla recipe.
struct ShareRequest {
    KnownState claim = KnownState::Generic;
    Fe basis_value = 0;
    bool fourier_input = false;  // input F|0> instead of a basis state

    static ShareRequest basis(Fe a) { return {KnownState::Generic, a, false}; }
    static ShareRequest fourier_zero() { return {KnownState::Generic, 0, true}; }
    static ShareRequest proven_zero() { return {KnownState::Zero, 0, false}; }
    static ShareRequest proven_plus() { return {KnownState::Plus, 0, true}; }
};

struct VqssParams {
    FieldParams field;
    std::uint32_t t = 0;
    std::uint32_t k = 1;
    std::uint32_t dealer = 0;
    BackendKind backend = BackendKind::Stabilizer;
    CoinMode coins = CoinMode::IdealVss;
};

struct TwoLevelRun {
    std::shared_ptr<QuantumMemory> mem;
    CssCode code;
    PlayerSet players;
    AccusationState acc;
    bool passed = false;
    std::vector<TreeWires> data;  // surviving data trees, one per request
    Transcript tr;
    CounterRng rng, adv_rng;
};

namespace vqss_detail {

// Prepare a level-1 system for the given state and re-encode each component.
inline TreeWires deal_tree(QuantumMemory& mem, const CssCode& code, WireId level1_input,
                           CounterRng& rng) {
    auto level1 = encode_state(mem, code, level1_input, rng);
    TreeWires tree;
    for (std::size_t i = 0; i < code.n(); ++i)
        tree.w.push_back(encode_state(mem, code, level1[i], rng));
    return tree;
}

// A tree whose level-1 system is the uniform superposition over `prep`
// (sum over V encodes "any basis state", sum over V_0 encodes |0>).
inline TreeWires deal_tree_superposition(QuantumMemory& mem, const CssCode& code,
                                         const RsCode& prep, CounterRng& rng) {
    auto level1 = prepare_code_superposition(mem, prep, rng);
    TreeWires tree;
    for (std::size_t i = 0; i < code.n(); ++i)
        tree.w.push_back(encode_state(mem, code, level1[i], rng));
    return tree;
}

inline void assign_tree_owners(QuantumMemory& mem, TreeWires& tree, Transcript& tr) {
    for (std::size_t i = 0; i < tree.w.size(); ++i)
        for (std::size_t j = 0; j < tree.w[i].size(); ++j) {
            mem.set_owner(tree.w[i][j], std::uint32_t(j));
            tr.send(std::int64_t(i), std::int64_t(j), "leaf");
        }
}

inline std::vector<WireId> cheater_wires(QuantumMemory& mem, const PlayerSet& players,
                                         const std::vector<TreeWires*>& trees) {
    std::vector<WireId> owned;
    for (const TreeWires* t : trees)
        for (const auto& branch : t->w)
            for (WireId w : branch)
                if (mem.alive(w) && players.is_cheater(mem.owner(w))) owned.push_back(w);
    return owned;
}

// Measure one whole tree, let corrupted leaf-holders lie about their
// outcomes, and fold the decoded verdicts into the accusation state.  With
// `assert_zero_top` the decoded top value must be zero or the dealer falls.
inline void measure_and_judge(QuantumMemory& mem, TreeWires& tree, const RsCode& rscode,
                              AccusationState& acc, std::uint32_t t,
                              const PlayerSet& players, const AdversaryStrategy& adv,
                              CounterRng& rng, CounterRng& adv_rng, Transcript& tr,
                              bool assert_zero_top) {
    const std::uint32_t n = tree.n();
    const std::uint32_t p = mem.p();
    std::vector<std::optional<DecodeOutcome>> outcomes(n);
    Codeword tops(n, 0);
    SupportSet erased = acc.b_global;
    for (std::size_t i = 0; i < n; ++i) {
        Codeword word(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            Fe outcome = mem.measure(tree.w[i][j], rng);
            Fe announced = outcome;
            if (players.is_cheater(j) && adv.on_broadcast)
                announced = adv.on_broadcast(j, outcome, adv_rng) % p;
            word[j] = announced;
        }
        tr.broadcast(std::int64_t(i), "tree-branch", word);
        if (acc.b_global.count(i)) continue;
        outcomes[i] = rs_decode(rscode, word, acc.b_branch[i]);
    }
    update_accusations(acc, t, outcomes, &tr);
    if (acc.disqualified) return;
    for (std::size_t i = 0; i < n; ++i) {
        if (erased.count(i) || acc.b_global.count(i)) {
            erased.insert(i);
            continue;
        }
        if (outcomes[i] && outcomes[i]->status == DecodeStatus::Decoded)
            tops[i] = outcomes[i]->secret;
        else
            erased.insert(i);
    }
    if (erased.size() > 2 * rscode.t()) {
        acc.disqualified = true;
        tr.disqualify(-1);
        return;
    }
    DecodeOutcome top = rs_decode(rscode, tops, erased);
    if (top.status != DecodeStatus::Decoded) {
        acc.disqualified = true;
        tr.disqualify(-1);
        return;
    }
    for (auto pos : top.error_support) acc.fail_branch(pos, t, &tr);
    if (assert_zero_top && !acc.disqualified && top.secret != 0) {
        acc.disqualified = true;
        tr.disqualify(-1);
    }
}

inline void rotate_tree(QuantumMemory& mem, TreeWires& tree, bool inverse, CounterRng& rng) {
    for (auto& branch : tree.w)
        for (WireId w : branch) {
            if (!inverse)
                mem.fourier(w, 1, rng);
            else
                mem.fourier_inv(w, 1, rng);
        }
}

inline void cadd_tree(QuantumMemory& mem, Fe b, const TreeWires& src, TreeWires& dst,
                      CounterRng& rng) {
    if (b == 0) return;
    for (std::size_t i = 0; i < src.w.size(); ++i)
        for (std::size_t j = 0; j < src.w[i].size(); ++j)
            mem.cadd(b, src.w[i][j], dst.w[i][j], rng);
}

}  // namespace vqss_detail

// --- literal (k+1)^2 sharing-and-verification --------------------------------

inline TwoLevelRun vqss_share_and_verify(const VqssParams& params, const ShareRequest& req,
                                         const PlayerSet& players,
                                         const AdversaryStrategy& adv, std::uint64_t seed,
                                         std::shared_ptr<QuantumMemory> ext_mem = nullptr) {
    using namespace vqss_detail;
    const std::uint32_t n = params.field.n;
    const std::uint32_t p = params.field.p;
    const std::uint32_t t = params.t;
    const std::uint32_t k = params.k;
    if (n != 4 * t + 1) throw Error("two-level sharing expects n = 4t+1");

    TwoLevelRun run;
    run.code = CssCode(params.field, 2 * t);
    run.players = players;
    run.acc = AccusationState(n);
    run.mem = ext_mem ? std::move(ext_mem)
                      : std::make_shared<QuantumMemory>(params.backend, p);
    run.rng = CounterRng(seed, 0);
    run.adv_rng = CounterRng(seed, 1);
    QuantumMemory& mem = *run.mem;
    CounterRng& rng = run.rng;
    Transcript& tr = run.tr;
    const CssCode& code = run.code;

    // --- dealing: systems S[l][m]; S[0][0] carries the data -----------------
    WireId input;
    if (req.claim == KnownState::Plus || req.fourier_input)
        input = mem.alloc_plus(rng);
    else {
        input = mem.alloc_zero(rng);
        if (req.basis_value) mem.x(input, req.basis_value, rng);
    }
    std::vector<std::vector<TreeWires>> sys(k + 1);
    for (std::uint32_t l = 0; l <= k; ++l) {
        for (std::uint32_t m = 0; m <= k; ++m) {
            if (l == 0 && m == 0) {
                sys[l].push_back(deal_tree(mem, code, input, rng));
            } else if (l == 0) {
                // masks for the computational challenges of the data row
                const RsCode& prep =
                    req.claim == KnownState::Zero ? code.v0_code() : code.v_code();
                sys[l].push_back(deal_tree_superposition(mem, code, prep, rng));
            } else if (m == 0) {
                // future Fourier-side ancillas
                const RsCode& prep =
                    req.claim == KnownState::Plus ? code.v_code() : code.v0_code();
                sys[l].push_back(deal_tree_superposition(mem, code, prep, rng));
            } else {
                // masks for the future Fourier ancillas; a plus claim keeps
                // those ancillas' top values in superposition, so the masks
                // must hide the top as well
                const RsCode& prep =
                    req.claim == KnownState::Plus ? code.v_code() : code.v0_code();
                sys[l].push_back(deal_tree_superposition(mem, code, prep, rng));
            }
        }
    }
    if (players.is_cheater(params.dealer) && adv.on_deal_wires) {
        std::vector<WireId> all;
        for (auto& row : sys)
            for (auto& tree : row)
                for (auto& branch : tree.w)
                    for (WireId w : branch) {
                        mem.set_owner(w, params.dealer);
                        all.push_back(w);
                    }
        AdversaryContext ctx(mem, players, run.adv_rng.derive(7));
        adv.on_deal_wires(ctx, all);
    }
    for (auto& row : sys)
        for (auto& tree : row) assign_tree_owners(mem, tree, tr);

    // --- computational challenges -------------------------------------------
    CoinSource coin_source{params.coins};
    FeVec coins = coin_source.draw(k, p, players, adv, rng, &tr);
    for (std::uint32_t m = 1; m <= k && !run.acc.disqualified; ++m) {
        for (std::uint32_t l = 0; l <= k; ++l)
            cadd_tree(mem, coins[m - 1], sys[l][0], sys[l][m], rng);
        if (adv.on_challenge) {
            std::vector<TreeWires*> live;
            for (std::uint32_t l = 0; l <= k; ++l) live.push_back(&sys[l][0]);
            AdversaryContext ctx(mem, players, run.adv_rng.derive(100 + m));
            adv.on_challenge(ctx, cheater_wires(mem, players, live));
        }
        for (std::uint32_t l = 0; l <= k && !run.acc.disqualified; ++l)
            measure_and_judge(mem, sys[l][m], code.v_code(), run.acc, t, players, adv, rng,
                              run.adv_rng, tr,
                              l == 0 && req.claim == KnownState::Zero);
    }

    // --- rotate, Fourier challenges, rotate back ------------------------------
    // (information-free on classical share data, where rotations do not exist)
    if (!run.acc.disqualified && params.backend != BackendKind::Share) {
        for (std::uint32_t l = 0; l <= k; ++l) rotate_tree(mem, sys[l][0], false, rng);
        FeVec coins2 = coin_source.draw(k, p, players, adv, rng, &tr);
        for (std::uint32_t l = 1; l <= k && !run.acc.disqualified; ++l) {
            cadd_tree(mem, coins2[l - 1], sys[0][0], sys[l][0], rng);
            if (adv.on_challenge) {
                std::vector<TreeWires*> live{&sys[0][0]};
                AdversaryContext ctx(mem, players, run.adv_rng.derive(200 + l));
                adv.on_challenge(ctx, cheater_wires(mem, players, live));
            }
            measure_and_judge(mem, sys[l][0], code.w_code(), run.acc, t, players, adv, rng,
                              run.adv_rng, tr, req.claim == KnownState::Plus);
        }
        if (!run.acc.disqualified) rotate_tree(mem, sys[0][0], true, rng);
    }

    run.passed = !run.acc.disqualified;
    run.data.push_back(sys[0][0]);
    return run;
}

// --- batched sharing-and-verification ----------------------------------------

// Certify several same-dealer trees at once: k Fourier ancillas check the
// data trees and the k computational ancillas first; the computational
// ancillas then check the data trees.  Requests must share one claim kind
// per batch, so callers group their sharings by claim.
inline void batched_verify_group(TwoLevelRun& run, std::vector<TreeWires>& data,
                                 KnownState claim, std::uint32_t k,
                                 const AdversaryStrategy& adv, const CoinSource& coins) {
    using namespace vqss_detail;
    QuantumMemory& mem = *run.mem;
    const CssCode& code = run.code;
    CounterRng& rng = run.rng;
    const std::uint32_t p = mem.p();
    const std::uint32_t t = run.players.t;
    Transcript& tr = run.tr;
    if (run.acc.disqualified || data.empty()) return;

    // dealer prepares the ancilla trees
    std::vector<TreeWires> fourier_anc, comp_anc;
    for (std::uint32_t l = 0; l < k; ++l) {
        const RsCode& four_prep =
            claim == KnownState::Plus ? code.v_code() : code.v0_code();
        const RsCode& comp_prep =
            claim == KnownState::Zero ? code.v0_code() : code.v_code();
        fourier_anc.push_back(deal_tree_superposition(mem, code, four_prep, rng));
        comp_anc.push_back(deal_tree_superposition(mem, code, comp_prep, rng));
    }
    for (auto& tree : fourier_anc) assign_tree_owners(mem, tree, tr);
    for (auto& tree : comp_anc) assign_tree_owners(mem, tree, tr);

    // --- Fourier-side batch: targets are the data trees and the comp ancillas
    // (skipped on the classical share backend, where it carries no content)
    const bool fourier_side = mem.kind() != BackendKind::Share;
    std::vector<TreeWires*> fourier_targets;
    for (auto& d : data) fourier_targets.push_back(&d);
    for (auto& c : comp_anc) fourier_targets.push_back(&c);
    if (fourier_side) {
        for (auto* tgt : fourier_targets) rotate_tree(mem, *tgt, false, rng);
        for (auto& a : fourier_anc) rotate_tree(mem, a, false, rng);
        for (std::uint32_t l = 0; l < k && !run.acc.disqualified; ++l) {
            FeVec ch = coins.draw(fourier_targets.size(), p, run.players, adv, rng, &tr);
            for (std::size_t j = 0; j < fourier_targets.size(); ++j)
                cadd_tree(mem, ch[j], *fourier_targets[j], fourier_anc[l], rng);
            if (adv.on_challenge) {
                AdversaryContext ctx(mem, run.players, run.adv_rng.derive(300 + l));
                adv.on_challenge(ctx, cheater_wires(mem, run.players, fourier_targets));
            }
            measure_and_judge(mem, fourier_anc[l], code.w_code(), run.acc, t, run.players,
                              adv, rng, run.adv_rng, tr, claim == KnownState::Plus);
        }
        if (!run.acc.disqualified)
            for (auto* tgt : fourier_targets) rotate_tree(mem, *tgt, true, rng);
    }

    // --- computational batch: the comp ancillas check the data trees ---------
    for (std::uint32_t l = 0; l < k && !run.acc.disqualified; ++l) {
        FeVec ch = coins.draw(data.size(), p, run.players, adv, rng, &tr);
        for (std::size_t j = 0; j < data.size(); ++j)
            cadd_tree(mem, ch[j], data[j], comp_anc[l], rng);
        if (adv.on_challenge) {
            std::vector<TreeWires*> live;
            for (auto& d : data) live.push_back(&d);
            AdversaryContext ctx(mem, run.players, run.adv_rng.derive(400 + l));
            adv.on_challenge(ctx, cheater_wires(mem, run.players, live));
        }
        measure_and_judge(mem, comp_anc[l], code.v_code(), run.acc, t, run.players, adv,
                          rng, run.adv_rng, tr, claim == KnownState::Zero);
    }
}

inline TwoLevelRun batched_share_and_verify(const VqssParams& params,
                                            const std::vector<ShareRequest>& requests,
                                            const PlayerSet& players,
                                            const AdversaryStrategy& adv,
                                            std::uint64_t seed,
                                            std::shared_ptr<QuantumMemory> ext_mem = nullptr) {
    using namespace vqss_detail;
    const std::uint32_t n = params.field.n;
    const std::uint32_t p = params.field.p;
    if (n != 4 * params.t + 1 && n != 6 * params.t + 1)
        throw Error("two-level sharing expects n = 4t+1 or n = 6t+1");

    TwoLevelRun run;
    run.code = CssCode(params.field, 2 * params.t);
    run.players = players;
    run.acc = AccusationState(n);
    run.mem = ext_mem ? std::move(ext_mem)
                      : std::make_shared<QuantumMemory>(params.backend, p);
    run.rng = CounterRng(seed, 0);
    run.adv_rng = CounterRng(seed, 1);
    QuantumMemory& mem = *run.mem;
    CounterRng& rng = run.rng;

    for (const ShareRequest& req : requests) {
        WireId input;
        if (req.claim == KnownState::Plus || req.fourier_input)
            input = mem.alloc_plus(rng);
        else {
            input = mem.alloc_zero(rng);
            if (req.basis_value) mem.x(input, req.basis_value, rng);
        }
        run.data.push_back(deal_tree(mem, run.code, input, rng));
    }
    if (players.is_cheater(params.dealer) && adv.on_deal_wires) {
        std::vector<WireId> all;
        for (auto& tree : run.data)
            for (auto& branch : tree.w)
                for (WireId w : branch) {
                    mem.set_owner(w, params.dealer);
                    all.push_back(w);
                }
        AdversaryContext ctx(mem, players, run.adv_rng.derive(7));
        adv.on_deal_wires(ctx, all);
    }
    for (auto& tree : run.data) assign_tree_owners(mem, tree, run.tr);

    // group the trees by claim and verify each group as one batch
    CoinSource coins{params.coins};
    for (KnownState claim :
         {KnownState::Generic, KnownState::Zero, KnownState::Plus}) {
        std::vector<TreeWires> group;
        std::vector<std::size_t> index;
        for (std::size_t i = 0; i < requests.size(); ++i)
            if (requests[i].claim == claim) {
                group.push_back(run.data[i]);
                index.push_back(i);
            }
        if (group.empty()) continue;
        batched_verify_group(run, group, claim, params.k, adv, coins);
        for (std::size_t j = 0; j < index.size(); ++j) run.data[index[j]] = group[j];
    }
    run.passed = !run.acc.disqualified;
    return run;
}

// --- reconstruction -----------------------------------------------------------

// Branch-wise decode against the accusation sets followed by erasure
// interpolation over the surviving branches.  Returns the extracted qupit,
// or nothing when the sharing never passed.
inline std::optional<WireId> vqss_reconstruct(TwoLevelRun& run, std::size_t tree_index,
                                              std::uint32_t receiver,
                                              const AdversaryStrategy& adv) {
    using namespace vqss_detail;
    if (!run.passed) return std::nullopt;
    QuantumMemory& mem = *run.mem;
    const CssCode& code = run.code;
    CounterRng& rng = run.rng;
    TreeWires& tree = run.data[tree_index];
    const std::uint32_t n = tree.n();
    const std::uint32_t t = run.players.t;

    if (adv.on_reconstruct) {
        AdversaryContext ctx(mem, run.players, run.adv_rng.derive(900));
        adv.on_reconstruct(ctx, cheater_wires(mem, run.players, {&tree}));
    }
    for (auto& branch : tree.w)
        for (WireId w : branch)
            if (mem.alive(w)) {
                mem.set_owner(w, receiver);
                run.tr.send(-1, receiver, "reconstruct-leaf");
            }

    AccusationState acc = run.acc;  // reconstruction-time additions are local
    std::vector<std::optional<WireId>> branch_out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (acc.b_global.count(i)) continue;
        BlockDecodeResult r = decode_block(mem, code, tree.w[i], acc.b_branch[i], t, rng);
        if (!r.ok) {
            acc.fail_branch(i, n, &run.tr);  // track, but never "disqualify" here
            continue;
        }
        branch_out[i] = r.output;
    }

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < n; ++i)
        if (branch_out[i] && !acc.b_global.count(i)) usable.push_back(i);
    if (usable.size() < code.delta() + 1) throw InsufficientShares();

    // top-level interpolation over the first delta+1 usable branch outputs
    std::vector<std::size_t> chosen(usable.begin(), usable.begin() + code.delta() + 1);
    std::vector<WireId> sub;
    for (std::size_t pos : chosen) sub.push_back(*branch_out[pos]);
    FieldMatrix to_coeffs = code.interpolation_matrix(chosen);
    apply_linear_map(mem, sub, to_coeffs, rng);
    WireId out = mem.alloc_zero(rng, receiver);
    mem.swap_wires(out, sub[0], rng);
    for (std::size_t i : usable) {
        if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
        mem.cadd(fp::neg(mem.p(), 1), out, *branch_out[i], rng);
    }
    run.tr.note("reconstructed-tree", {Fe(tree_index)});
    return out;
}

}  // namespace qss

#endif
