#ifndef QSS_PROTOCOLS_CLASSICAL_VSS_HPP
#define QSS_PROTOCOLS_CLASSICAL_VSS_HPP

// Classical verifiable secret sharing over a two-level share tree.  The
// dealer never needs to remember its sharing randomness: verification works
// entirely from broadcast linear combinations decoded against the code, and
// reconstruction runs the recovery algorithm over the final accusation sets.
// Runs with n = 4t+1 and degree 2t.

#include <memory>
#include <optional>

#include "qss/engine.hpp"
#include "qss/sharetree.hpp"

namespace qss {

struct ClassicalVssParams {
    FieldParams field;
    std::uint32_t t = 0;
    std::uint32_t k = 0;  // verification challenges
    CoinMode coins = CoinMode::IdealVss;
};

struct ClassicalVssResult {
    bool passed = false;
    AccusationState acc;
    ShareTree tree;  // the secret-carrying tree actually held by players
    std::optional<Fe> reconstructed;
    Fe dealt_secret = 0;
    Transcript transcript;
    // ground truth for soundness accounting
    bool tree_two_good = false;
    Fe two_good_secret = 0;
};

namespace cvss_detail {

inline ShareTree broadcast_tree(const ShareTree& truth, std::uint32_t p,
                                const PlayerSet& players, const AdversaryStrategy& adv,
                                CounterRng& rng, Transcript& tr, const char* label) {
    ShareTree announced(truth.n);
    for (std::size_t j = 0; j < truth.n; ++j) {
        FeVec column;
        for (std::size_t i = 0; i < truth.n; ++i) {
            Fe honest = truth.at(i, j);
            Fe value = honest;
            if (players.is_cheater(j) && adv.on_broadcast)
                value = adv.on_broadcast(j, honest, rng) % p;
            announced.at(i, j) = value;
            column.push_back(value);
        }
        tr.broadcast(std::int64_t(j), label, column);
    }
    return announced;
}

}  // namespace cvss_detail

inline ClassicalVssResult run_classical_vss(const ClassicalVssParams& params, Fe secret,
                                            const PlayerSet& players,
                                            const AdversaryStrategy& adv,
                                            std::uint64_t seed) {
    const std::uint32_t n = params.field.n;
    const std::uint32_t p = params.field.p;
    const std::uint32_t t = params.t;
    if (n != 4 * t + 1) throw Error("classical vss expects n = 4t+1");
    RsCode code(params.field, 2 * t);

    ClassicalVssResult res;
    res.acc = AccusationState(n);
    res.dealt_secret = secret;
    Transcript& tr = res.transcript;
    CounterRng rng(seed, 0);
    CounterRng adv_rng(seed, 1);

    // --- sharing ------------------------------------------------------------
    std::vector<Codeword> level1;
    {
        auto [w0, q0] = rs_share(code, secret, rng);
        level1.push_back(w0);
        for (std::uint32_t l = 1; l <= params.k; ++l)
            level1.push_back(rs_share(code, rng.field_element(p), rng).first);
    }
    bool dealer_cheats = players.is_cheater(0);  // dealer is player 0 by convention
    if (dealer_cheats && adv.on_deal) {
        DealView view{&level1, p, -1};
        adv.on_deal(view, players, adv_rng);
    }

    // level-2 re-sharing: trees[l].at(i, j) = player j's share of v_l(i)
    std::vector<ShareTree> trees(params.k + 1, ShareTree(n));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Codeword> reshares;
        for (std::uint32_t l = 0; l <= params.k; ++l)
            reshares.push_back(rs_share(code, level1[l][i], rng).first);
        if (players.is_cheater(i) && adv.on_deal) {
            DealView view{&reshares, p, int(i)};
            adv.on_deal(view, players, adv_rng);
        }
        for (std::uint32_t l = 0; l <= params.k; ++l)
            for (std::size_t j = 0; j < n; ++j) {
                trees[l].at(i, j) = reshares[l][j];
                tr.send(std::int64_t(i), std::int64_t(j), "share", {reshares[l][j]});
            }
    }

    // --- verification ---------------------------------------------------------
    CoinSource coin_source{params.coins};
    for (std::uint32_t l = 1; l <= params.k && !res.acc.disqualified; ++l) {
        Fe b = coin_source.draw(1, p, players, adv, rng, &tr)[0];
        ShareTree combined(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                combined.at(i, j) =
                    fp::add(p, trees[l].at(i, j), fp::mul(p, b, trees[0].at(i, j)));
        ShareTree announced =
            cvss_detail::broadcast_tree(combined, p, players, adv, rng, tr, "verify");

        std::vector<std::optional<DecodeOutcome>> outcomes(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (res.acc.b_global.count(i)) continue;
            outcomes[i] = rs_decode(code, announced.branch(i), res.acc.b_branch[i]);
        }
        update_accusations(res.acc, t, outcomes, &tr);
        if (res.acc.disqualified) break;

        Codeword tops(n, 0);
        SupportSet erased = res.acc.b_global;
        for (std::size_t i = 0; i < n; ++i) {
            if (erased.count(i)) continue;
            if (outcomes[i] && outcomes[i]->status == DecodeStatus::Decoded)
                tops[i] = outcomes[i]->secret;
            else
                erased.insert(i);
        }
        if (erased.size() > 2 * code.t()) {
            res.acc.disqualified = true;
            tr.disqualify(-1);
            break;
        }
        DecodeOutcome top = rs_decode(code, tops, erased);
        if (top.status != DecodeStatus::Decoded) {
            res.acc.disqualified = true;
            tr.disqualify(-1);
            break;
        }
        for (auto pos : top.error_support) res.acc.fail_branch(pos, t, &tr);
    }
    res.passed = !res.acc.disqualified;
    res.tree = trees[0];
    res.tree_two_good =
        res.passed && two_good(trees[0], code, res.acc, players.cheaters, &res.two_good_secret);

    // --- reconstruction -------------------------------------------------------
    if (res.passed) {
        ShareTree revealed =
            cvss_detail::broadcast_tree(trees[0], p, players, adv, rng, tr, "reveal");
        res.reconstructed = recover(revealed, code, res.acc);
        tr.note("reconstructed", {*res.reconstructed});
    }
    return res;
}

// --- canned adversaries -------------------------------------------------------

// Cheating dealer: bumps one component of the secret word and pre-guesses
// every challenge, compensating the masking words.  The deviation stays
// unlocalized exactly when all guesses match the real coins.
inline AdversaryStrategy guess_ahead_dealer(std::size_t error_pos, Fe error_val = 1) {
    AdversaryStrategy a;
    a.name = "guess-ahead";
    a.on_deal = [error_pos, error_val](DealView& view, const PlayerSet&, CounterRng& rng) {
        if (view.reshare_branch >= 0) return;
        auto& words = *view.words;
        std::uint32_t p = view.p;
        Fe e = error_val % p;
        words[0][error_pos] = fp::add(p, words[0][error_pos], e);
        for (std::size_t l = 1; l < words.size(); ++l) {
            Fe guess = rng.field_element(p);
            words[l][error_pos] =
                fp::sub(p, words[l][error_pos], fp::mul(p, guess, e));
        }
    };
    return a;
}

// Corrupted re-sharer: distributes an inconsistent branch word for the
// secret tree, compensated in the masking trees by coin guesses.
inline AdversaryStrategy guess_ahead_resharer(std::size_t branch, std::size_t leaf_pos,
                                              Fe error_val = 1) {
    AdversaryStrategy a;
    a.name = "guess-ahead-resharer";
    a.on_deal = [branch, leaf_pos, error_val](DealView& view, const PlayerSet&,
                                              CounterRng& rng) {
        if (view.reshare_branch != int(branch)) return;
        auto& words = *view.words;
        std::uint32_t p = view.p;
        Fe e = error_val % p;
        words[0][leaf_pos] = fp::add(p, words[0][leaf_pos], e);
        for (std::size_t l = 1; l < words.size(); ++l) {
            Fe guess = rng.field_element(p);
            words[l][leaf_pos] = fp::sub(p, words[l][leaf_pos], fp::mul(p, guess, e));
        }
    };
    return a;
}

// A player who broadcasts uniform garbage whenever asked.
inline AdversaryStrategy broadcast_liar() {
    AdversaryStrategy a;
    a.name = "broadcast-liar";
    a.on_broadcast = [](std::size_t, Fe, CounterRng& rng) {
        return Fe(rng.next_below(0x7fffffff));
    };
    return a;
}

}  // namespace qss

#endif
