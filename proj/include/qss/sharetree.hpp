#ifndef QSS_SHARETREE_HPP
#define QSS_SHARETREE_HPP

// Two-level n x n share trees: branch i is the word re-shared by player i,
// leaf (i, j) is held by player j.  A tree is "2-good" with respect to
// accusation sets when apparent cheaters are real cheaters, every surviving
// branch is consistent with a codeword away from its suspects, and the
// branch values themselves form a codeword away from B.  Recovery from a
// 2-good tree is independent of anything the cheaters broadcast.

#include <optional>
#include <vector>

#include "qss/engine.hpp"
#include "qss/rs.hpp"

namespace qss {

struct ShareTree {
    std::uint32_t n = 0;
    std::vector<FeVec> leaves;  // leaves[i][j] = leaf j of branch i

    ShareTree() = default;
    explicit ShareTree(std::uint32_t n_) : n(n_), leaves(n_, FeVec(n_, 0)) {}

    Fe& at(std::size_t branch, std::size_t leaf) { return leaves[branch][leaf]; }
    Fe at(std::size_t branch, std::size_t leaf) const { return leaves[branch][leaf]; }

    const FeVec& branch(std::size_t i) const { return leaves[i]; }
};

namespace detail {

// Unique codeword agreeing with `word` outside `unknown`, if any.
inline std::optional<Codeword> fit_away_from(const RsCode& code, const Codeword& word,
                                             const SupportSet& unknown) {
    std::vector<bool> mask(code.n(), false);
    for (auto i : unknown)
        if (i < code.n()) mask[i] = true;
    return fit_outside(code, word, mask);
}

}  // namespace detail

// The 2-good predicate, decidable given the real cheater set.
inline bool two_good(const ShareTree& tree, const RsCode& code, const AccusationState& acc,
                     const SupportSet& cheaters, Fe* secret_out = nullptr) {
    std::uint32_t n = tree.n;
    for (std::size_t i = 0; i < n; ++i) {
        if (cheaters.count(i)) continue;
        for (auto accused : acc.b_branch[i])
            if (!cheaters.count(accused)) return false;  // honest player accused
    }
    Codeword tops(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (acc.b_global.count(i)) continue;
        SupportSet unknown = cheaters;
        for (auto j : acc.b_branch[i]) unknown.insert(j);
        auto fit = detail::fit_away_from(code, tree.branch(i), unknown);
        if (!fit) return false;
        tops[i] = code.secret_of(*fit);
    }
    auto top_fit = detail::fit_away_from(code, tops, acc.b_global);
    if (!top_fit) return false;
    if (secret_out) *secret_out = code.secret_of(*top_fit);
    return true;
}

// Reconstruction from a broadcast tree.  Branches with more than t-b extra
// errors yield no value and are skipped; any dim() surviving values pin the
// unique secret.
inline Fe recover(const ShareTree& tree, const RsCode& code, const AccusationState& acc) {
    std::uint32_t p = code.p();
    std::size_t t = code.t();
    std::vector<std::pair<Fe, Fe>> points;
    for (std::size_t i = 0; i < tree.n && points.size() < code.dim(); ++i) {
        if (acc.b_global.count(i)) continue;
        const SupportSet& bi = acc.b_branch[i];
        if (bi.size() > t) continue;
        DecodeOutcome out = rs_decode(code, tree.branch(i), bi);
        if (out.status != DecodeStatus::Decoded) continue;  // a_i = null
        // for scaled codes the branch values a_i sit in a scaled codeword
        points.push_back({Fe((i + 1) % p), fp::div(p, out.secret, code.scale_at(i))});
    }
    if (points.size() < code.dim()) throw RecoveryFailed();
    FieldPoly poly = interpolate(p, points);
    return poly.eval(p, 0);
}

}  // namespace qss

#endif
