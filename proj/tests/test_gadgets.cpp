#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "qss/protocols/adversaries.hpp"
#include "qss/protocols/gadgets.hpp"
#include "qss/stats.hpp"

using namespace qss;

namespace {

struct Fixture {
    QuantumMemory mem;
    GadgetCodes codes;
    CounterRng rng, adv_rng;
    PlayerSet players;
    AdversaryStrategy none = honest_adversary();

    Fixture(std::uint32_t p, std::uint32_t n, std::uint32_t delta, std::uint64_t seed,
            BackendKind kind = BackendKind::Stabilizer)
        : mem(kind, p),
          codes(FieldParams(p, n), delta),
          rng(seed, 0),
          adv_rng(seed, 1),
          players(n, (n - 1) / 4 ? (n - 1) / 4 : 1) {}

    EncodedWire encode_basis(Fe a, std::uint32_t degree) {
        WireId in = mem.alloc_zero(rng);
        if (a) mem.x(in, a, rng);
        return encode_logical(mem, codes, in, degree, rng);
    }
    EncodedWire encode_fourier_zero(std::uint32_t degree) {
        WireId in = mem.alloc_plus(rng);
        return encode_logical(mem, codes, in, degree, rng);
    }
    // exact check: decode and compare against a basis state
    bool decodes_to_basis(const EncodedWire& e, Fe want) {
        auto out = decode_logical(mem, codes, e, players.t, rng);
        return out && mem.wire_is_basis_state(*out, want);
    }
    bool decodes_to_fourier(const EncodedWire& e, Fe shift) {
        auto out = decode_logical(mem, codes, e, players.t, rng);
        // F|shift> is fixed by w^{shift} X
        return out && mem.wire_has_stabilizer(*out, 1, 0, shift);
    }
};

}  // namespace

TEST_CASE("transversal linear gates act logically") {
    for (auto [p, n, delta] : std::vector<std::array<std::uint32_t, 3>>{
             {7, 5, 2}, {11, 7, 2}}) {
        Fixture f(p, n, delta, 7 * p);
        for (Fe a = 0; a < p; a += (p > 7 ? 3 : 1)) {
            SECTION("x shift and mul at p=" + std::to_string(p) + " a=" + std::to_string(a)) {
                EncodedWire e = f.encode_basis(a, delta);
                logical_x(f.mem, f.codes, e, 2, f.rng);
                logical_mul(f.mem, f.codes, e, 3, f.rng);
                CHECK(f.decodes_to_basis(e, fp::mul(p, fp::add(p, a, 2), 3)));
            }
            SECTION("cadd on basis pairs p=" + std::to_string(p) + " a=" + std::to_string(a)) {
                EncodedWire e1 = f.encode_basis(a, delta);
                EncodedWire e2 = f.encode_basis(fp::add(p, a, 1), delta);
                logical_cadd(f.mem, 4, e1, e2, f.rng);
                CHECK(f.decodes_to_basis(
                    e2, fp::add(p, fp::add(p, a, 1), fp::mul(p, 4, a))));
                CHECK(f.decodes_to_basis(e1, a));
            }
        }
        SECTION("z phase is invisible on basis states but real on rotated ones") {
            EncodedWire e = f.encode_fourier_zero(delta);
            logical_z(f.mem, f.codes, e, 3, f.rng);
            // Z^3 F|0> = F X^{-...}: check stabilizer: Z^c F|0> fixed by w^{-c}... X
            auto out = decode_logical(f.mem, f.codes, e, f.players.t, f.rng);
            REQUIRE(out);
            // Z^3|plus> has stabilizer w^{3} X? verify via statevector oracle at
            // small scale instead: measure in fourier frame
            f.mem.fourier_inv(*out, 1, f.rng);
            // F^{ -1} Z^3 F |0> = X^{3}|0> = |3>
            CHECK(f.mem.wire_is_basis_state(*out, 3));
        }
    }
}

TEST_CASE("cadd keeps entangled logical pairs exact") {
    Fixture f(7, 5, 2, 99);
    EncodedWire e1 = f.encode_fourier_zero(2);
    EncodedWire e2 = f.encode_basis(4, 2);
    logical_cadd(f.mem, 1, e1, e2, f.rng);
    auto o1 = decode_logical(f.mem, f.codes, e1, 1, f.rng);
    auto o2 = decode_logical(f.mem, f.codes, e2, 1, f.rng);
    REQUIRE(o1);
    REQUIRE(o2);
    // expected state: sum_a |a, 4+a>, stabilized by X (x) X and w^{-4} Z^{-1} (x) Z
    CounterRng chk(5);
    PauliOp g1(7, FeVec{1, 1}, FeVec{0, 0});
    PauliOp g2(7, FeVec{0, 0}, FeVec{6, 1}, 3);  // w^{-4} = w^3
    CHECK(f.mem.wires_have_stabilizer({*o1, *o2}, g1, chk));
    CHECK(f.mem.wires_have_stabilizer({*o1, *o2}, g2, chk));
}

TEST_CASE("scaled fourier is transversal when the degrees coincide") {
    for (auto [p, n, delta] : std::vector<std::array<std::uint32_t, 3>>{
             {7, 5, 2}, {11, 7, 3}}) {
        Fixture f(p, n, delta, 13 * p);
        REQUIRE(n == 2 * delta + 1);
        for (Fe a = 0; a < p; a += (p > 7 ? 2 : 1)) {
            EncodedWire e = f.encode_basis(a, delta);
            scaled_fourier(f.mem, f.codes, e, false, f.rng);
            CHECK(e.degree == delta);  // self-dual degree
            auto out = decode_logical(f.mem, f.codes, e, f.players.t, f.rng);
            REQUIRE(out);
            // F|a> is fixed by w^{a} X
            CHECK(f.mem.wire_has_stabilizer(*out, 1, 0, a));
        }
        // and F applied to F|0> gives |0> back
        EncodedWire e = f.encode_fourier_zero(delta);
        scaled_fourier(f.mem, f.codes, e, false, f.rng);
        CHECK(f.decodes_to_basis(e, 0));
    }
}

TEST_CASE("expansion teleports onto the high-degree code exactly") {
    Fixture f(11, 7, 2, 21);
    for (Fe a : {Fe(0), Fe(1), Fe(5), Fe(10)}) {
        EncodedWire e = f.encode_basis(a, 2);
        auto bc = expand_encoding(f.mem, f.codes, e, f.players, f.none, f.rng, f.adv_rng);
        REQUIRE(bc.ok);
        CHECK(e.degree == 4);
        CHECK(f.decodes_to_basis(e, a));
        // the broadcast word is a clean scaled codeword
        CHECK(rs_detect(f.codes.low.w_code(), bc.word));
    }
    SECTION("phase repair matters for superpositions") {
        EncodedWire e = f.encode_fourier_zero(2);
        auto bc = expand_encoding(f.mem, f.codes, e, f.players, f.none, f.rng, f.adv_rng);
        REQUIRE(bc.ok);
        CHECK(f.decodes_to_fourier(e, 0));
    }
}

TEST_CASE("degree reduction maps the high-degree encoding down exactly") {
    // every basis input plus the rotated input, at both parameter sets
    for (auto [p, n, delta] : std::vector<std::array<std::uint32_t, 3>>{
             {7, 5, 2}, {11, 7, 2}}) {
        Fixture f(p, n, delta, 31 * p);
        std::uint32_t dp = n - delta - 1;
        for (Fe a = 0; a < p; ++a) {
            EncodedWire e = f.encode_basis(a, dp);
            auto bc = reduce_encoding(f.mem, f.codes, e, f.players, f.none, f.rng,
                                      f.adv_rng);
            REQUIRE(bc.ok);
            CHECK(e.degree == delta);
            CHECK(f.decodes_to_basis(e, a));
        }
        EncodedWire e = f.encode_fourier_zero(dp);
        auto bc = reduce_encoding(f.mem, f.codes, e, f.players, f.none, f.rng, f.adv_rng);
        REQUIRE(bc.ok);
        CHECK(f.decodes_to_fourier(e, 0));
    }
}

TEST_CASE("toffoli gadget on classical share data") {
    // components act player-wise on the share backend, including the
    // expansion of the target
    Fixture f(11, 7, 2, 77, BackendKind::Share);
    CounterRng pick(3);
    int trials = 0;
    for (Fe a = 0; a < 5; ++a)
        for (Fe b = 0; b < 5; ++b)
            for (Fe c = 0; c < 5; ++c) {
                EncodedWire ea = f.encode_basis(a, 2);
                EncodedWire eb = f.encode_basis(b, 2);
                EncodedWire ec = f.encode_basis(c, 2);
                auto bc = logical_toffoli(f.mem, f.codes, ea, eb, ec, f.players, f.none,
                                          f.rng, f.adv_rng);
                REQUIRE(bc.ok);
                CHECK(ec.degree == 4);
                CHECK(f.decodes_to_basis(ec, fp::add(11, c, fp::mul(11, a, b))));
                CHECK(f.decodes_to_basis(ea, a));
                CHECK(f.decodes_to_basis(eb, b));
                ++trials;
            }
    CHECK(trials == 125);
    for (int extra = 0; extra < 100; ++extra) {
        Fe a = pick.field_element(11), b = pick.field_element(11), c = pick.field_element(11);
        EncodedWire ea = f.encode_basis(a, 2);
        EncodedWire eb = f.encode_basis(b, 2);
        EncodedWire ec = f.encode_basis(c, 2);
        logical_toffoli(f.mem, f.codes, ea, eb, ec, f.players, f.none, f.rng, f.adv_rng);
        CHECK(f.decodes_to_basis(ec, fp::add(11, c, fp::mul(11, a, b))));
    }
}

TEST_CASE("transversal measurement matches the logical distribution") {
    std::map<Fe, std::uint64_t> counts;
    for (int trial = 0; trial < 3000; ++trial) {
        Fixture f(7, 5, 2, 1000 + trial);
        EncodedWire e = f.encode_fourier_zero(2);
        auto v = logical_measure(f.mem, f.codes, e, f.players, f.none, f.rng, f.adv_rng);
        REQUIRE(v);
        counts[*v]++;
    }
    std::vector<std::uint64_t> c;
    for (Fe a = 0; a < 7; ++a) c.push_back(counts[a]);
    CHECK(stats::chi2_uniform_pvalue(c) > 0.01);

    // basis states measure deterministically
    Fixture f(7, 5, 2, 5);
    EncodedWire e = f.encode_basis(4, 2);
    auto v = logical_measure(f.mem, f.codes, e, f.players, f.none, f.rng, f.adv_rng);
    REQUIRE(v);
    CHECK(*v == 4);
}

TEST_CASE("gadget broadcasts survive lying components") {
    // t corrupted owners lie about the expansion frame; the scaled-code
    // decoder corrects them
    Fixture f(11, 7, 2, 55);
    for (std::size_t cheat = 0; cheat < 7; cheat += 3) {
        PlayerSet players(7, 1, {cheat});
        EncodedWire e = f.encode_basis(6, 2);
        for (std::size_t i = 0; i < 7; ++i) f.mem.set_owner(e.comps[i], std::uint32_t(i));
        AdversaryStrategy liar = broadcast_liar();
        auto bc = expand_encoding(f.mem, f.codes, e, players, liar, f.rng, f.adv_rng);
        REQUIRE(bc.ok);
        CHECK(f.decodes_to_basis(e, 6));
    }
}
