#include "doctest.h"

#include "parex/group.hpp"
#include "parex/lattice.hpp"
#include "parex/matrix.hpp"
#include "parex/rng.hpp"

using namespace parex;

TEST_CASE("rational parse and print round-trip") {
    CHECK(rational_str(Rational(3, 4)) == "3/4");
    CHECK(rational_str(Rational(-8, 2)) == "-4");
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(parse_rational("22/-42") == Rational(-11, 21));
    CHECK(parse_rational(rational_str(Rational(-11, 21))) == Rational(-11, 21));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("ab"), std::invalid_argument);
}

TEST_CASE("rref, rank, kernel, cokernel") {
    QMat a = QMat::from_rows({{1, 2, 3}, {2, 4, 6}});
    CHECK(a.rank() == 1);

    auto k = kernel_with_retraction(a);
    CHECK(k.incl.cols() == 2);
    CHECK((a * k.incl).is_zero());
    CHECK(k.retr * k.incl == QMat::identity(2));

    auto c = cokernel_with_section(a);
    CHECK(c.proj.rows() == 1);
    CHECK((c.proj * a).is_zero());
    CHECK(c.proj * c.sect == QMat::identity(1));

    QMat inv3 = QMat::from_rows({{Rational(1, 2), 0, 1}, {0, 1, 1}, {0, 0, 3}});
    auto inv = inv3.inverse();
    REQUIRE(inv.has_value());
    CHECK(*inv * inv3 == QMat::identity(3));
    CHECK(inv3 * *inv == QMat::identity(3));
    CHECK_FALSE(a.is_invertible());

    QMat b = QMat::from_rows({{1}, {2}});
    auto x = a.transposed().solve(QMat::from_rows({{5}, {10}, {15}}));
    REQUIRE(x.has_value());
    CHECK(a.transposed() * *x == QMat::from_rows({{5}, {10}, {15}}));
    CHECK_FALSE(a.transposed().solve(QMat::from_rows({{5}, {10}, {16}})).has_value());
    CHECK(QMat::block_diag(b, b.transposed()).rank() == 2);
}

TEST_CASE("rng determinism and sub-seeding") {
    CHECK(Rng::sub_seed(7, "alpha") == Rng::sub_seed(7, "alpha"));
    CHECK(Rng::sub_seed(7, "alpha") != Rng::sub_seed(7, "beta"));
    CHECK(Rng::sub_seed(7, "alpha") != Rng::sub_seed(8, "alpha"));
    Rng r1(42), r2(42);
    for (int i = 0; i < 20; i++) CHECK(r1.below(100) == r2.below(100));
    Rng r3(42);
    for (int i = 0; i < 50; i++) {
        auto v = r3.below(10);
        CHECK(v < 10);
        auto q = r3.small_rational();
        CHECK(abs(numerator(q)) <= 2);
    }
}

TEST_CASE("poset construction guards") {
    CHECK_THROWS_AS(FinPoset::from_covers({0, 1}, {{0, 1}, {1, 0}}), InputError);
    CHECK_THROWS_AS(FinPoset::from_covers({0}, {{0, 0}}), InputError);
    CHECK_THROWS_AS(FinPoset::from_covers({0, 1}, {{0, 5}}), InputError);
    CHECK_THROWS_AS(FinPoset::from_covers({0, 0}, {}), InputError);

    // non-transitive leq matrix
    std::vector<std::vector<bool>> leq = {{true, true, false},
                                          {false, true, true},
                                          {false, false, true}};
    CHECK_THROWS_AS(FinPoset::from_leq({0, 1, 2}, std::move(leq)), InputError);
}

TEST_CASE("poset chains, bounds, induced") {
    auto c2 = chain_lattice(2);
    auto chains = c2.chains();
    CHECK(chains.size() == 7);
    CHECK(chains.front() == std::vector<size_t>{0});
    CHECK(chains.back() == std::vector<size_t>({0, 1, 2}));
    CHECK(c2.bottom() == 0);
    CHECK(c2.top() == 2);
    CHECK(c2.down_set(1) == std::vector<size_t>({0, 1}));
    CHECK(c2.up_set(1) == std::vector<size_t>({1, 2}));

    auto p3 = powerset_lattice(3);
    auto sub = p3.induced(p3.down_set(3)); // subsets of {0,1}
    CHECK(sub.size() == 4);
    CHECK(sub.id_of(3) == 3);
    CHECK(sub.top() == 3);
}

TEST_CASE("lattice laws on powersets") {
    for (unsigned n = 0; n <= 5; n++) {
        auto L = powerset_lattice(n);
        CHECK(L.size() == (size_t{1} << n));
        CHECK(L.is_distributive());
        CHECK(L.is_complementable());
        CHECK(boolean_atom_iso(L));
        CHECK(L.atoms().size() == n);
    }
    auto p3 = powerset_lattice(3);
    CHECK(p3.meet(3, 5) == 1);
    CHECK(p3.join(3, 5) == 7);
    CHECK(p3.complement(1) == size_t{6});
    CHECK(p3.complement(7) == size_t{0});
}

TEST_CASE("non-distributive witnesses") {
    auto m3 = diamond_m3();
    auto w = m3.distributivity_witness();
    REQUIRE(w.has_value());
    CHECK(m3.meet(w->x, m3.join(w->y, w->z)) !=
          m3.join(m3.meet(w->x, w->y), m3.meet(w->x, w->z)));
    CHECK(m3.is_complementable()); // complements exist, just not uniquely

    auto n5 = pentagon_n5();
    auto w5 = n5.distributivity_witness();
    REQUIRE(w5.has_value());
    CHECK(n5.meet(w5->x, n5.join(w5->y, w5->z)) !=
          n5.join(n5.meet(w5->x, w5->y), n5.meet(w5->x, w5->z)));
}

TEST_CASE("chains lack complements, one-element lattice degenerates") {
    auto c2 = chain_lattice(2);
    CHECK_FALSE(c2.complement(1).has_value());
    CHECK_FALSE(c2.is_complementable());
    CHECK(c2.is_distributive());

    auto one = chain_lattice(0);
    CHECK(one.degenerate());
    CHECK(one.is_distributive());
    CHECK(one.is_complementable());
    CHECK(one.bot() == one.top());
}

TEST_CASE("product lattice keeps componentwise structure") {
    auto prod = product_lattice(chain_lattice(1), chain_lattice(1));
    CHECK(prod.size() == 4);
    CHECK(prod.is_distributive());
    CHECK(prod.is_complementable());
    CHECK(boolean_atom_iso(prod));
}

TEST_CASE("smash localization of a powerset") {
    auto p2 = powerset_lattice(2);
    auto loc = smash_localization(p2, 1); // x = {0}
    CHECK(loc.sub->size() == 2);
    CHECK(loc.sub->id_of(0) == 0);
    CHECK(loc.sub->id_of(1) == 1);
    // project: a |-> {0} ∧ a
    CHECK(loc.project.map == std::vector<size_t>({0, 1, 0, 1}));
    // incl_bot is the plain inclusion
    CHECK(loc.incl_bot.map == std::vector<size_t>({0, 1}));
    // incl_comp: b |-> {1} ∨ b
    CHECK(loc.incl_comp.map == std::vector<size_t>({2, 3}));

    CHECK_THROWS_AS(smash_localization(chain_lattice(2), 1), InputError);
}

TEST_CASE("complement decomposition round-trips") {
    auto p3 = powerset_lattice(3);
    auto dec = complement_decomposition(p3, 1); // x = {0}
    CHECK(dec.product->size() == 8);
    // fwd of {0,2} = ({0}, {2}): part index 1, copart index of {2}
    size_t copart_idx = 0;
    for (size_t i = 0; i < dec.copart.to_ambient.size(); i++)
        if (dec.copart.sub->id_of(i) == 4) copart_idx = i;
    CHECK(dec.fwd.map[5] == 1 * dec.copart.sub->size() + copart_idx);
    CHECK(dec.bwd.map[dec.fwd.map[5]] == 5);
}

TEST_CASE("excisable structures validate downward closure") {
    auto p3 = powerset_lattice(3);
    auto star = singleton_star(p3);
    CHECK(star.members == std::vector<size_t>({0, 1, 2, 4}));
    star.validate();

    ExcisableStructure bad{&p3, {0, 3}}; // misses {0} and {1} below {0,1}
    CHECK_THROWS_AS(bad.validate(), InputError);
    ExcisableStructure empty{&p3, {}};
    CHECK_THROWS_AS(empty.validate(), InputError);
    ExcisableStructure nobot{&p3, {1}};
    CHECK_THROWS_AS(nobot.validate(), InputError);

    auto loc = smash_localization(p3, 3); // x = {0,1}
    auto induced = induced_excisable(loc, star);
    CHECK(induced.members.size() == 3); // ∅, {0}, {1}
}

TEST_CASE("decomposition triples") {
    auto p3 = powerset_lattice(3);
    auto t = make_triple(p3, 1, 2); // a={0}, d={1}
    CHECK(t.z == 4);                // {2}
    CHECK_THROWS_AS(make_triple(p3, 3, 2), InputError); // overlap in {1}

    auto la = smash_localization(p3, 1);
    auto f = face_map(p3, la, 2); // y |-> {1} ∨ y
    CHECK(f.map == std::vector<size_t>({2, 3}));
    CHECK_THROWS_AS(face_map(p3, la, 1), InputError);
    CHECK(f.is_order_reflecting());
}

TEST_CASE("boolean atom iso rejects non-boolean lattices") {
    CHECK_FALSE(boolean_atom_iso(chain_lattice(2)));
    CHECK_FALSE(boolean_atom_iso(diamond_m3()));
}

TEST_CASE("group law validation") {
    CHECK(FiniteGroup::cyclic(4).inverse(1) == 3);
    CHECK(FiniteGroup::symmetric(3).order() == 6);
    CHECK(FiniteGroup::named("S3").same_table(FiniteGroup::symmetric(3)));
    CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {1, 1}}), InputError);
    CHECK_THROWS_AS(FiniteGroup::from_table({{1, 0}, {0, 0}}), InputError);
    CHECK_THROWS_AS(FiniteGroup::named("Q8"), InputError);
}

TEST_CASE("subgroup lattice and conjugacy classes") {
    auto c4 = FiniteGroup::cyclic(4);
    CHECK(c4.subgroups().size() == 3);
    CHECK(c4.subgroup_class_reps().size() == 3);

    auto s3 = FiniteGroup::symmetric(3);
    CHECK(s3.subgroups().size() == 6); // e, three C2s, A3, S3
    auto reps = s3.subgroup_class_reps();
    REQUIRE(reps.size() == 4);
    CHECK(reps[0].size() == 1);
    CHECK(reps[1].size() == 2);
    CHECK(reps[2].size() == 3);
    CHECK(reps[3].size() == 6);
}

TEST_CASE("g-sets, orbits, stabilizers") {
    auto c2 = FiniteGroup::cyclic(2);
    auto free_orbit = GSet::cosets(&c2, {0});
    CHECK(free_orbit.size() == 2);
    CHECK(free_orbit.transitive());
    CHECK(free_orbit.stabilizer(0) == std::vector<size_t>({0}));

    auto fixed = GSet::cosets(&c2, {0, 1});
    CHECK(fixed.size() == 1);
    CHECK(fixed.stabilizer(0).size() == 2);

    auto both = disjoint_union(free_orbit, fixed);
    CHECK(both.total.orbits().size() == 2);
    CHECK(both.total.orbits()[0] == std::vector<size_t>({0, 1}));

    // bad action table: g=3 disagrees with g=1 * g=2
    auto c4 = FiniteGroup::cyclic(4);
    std::vector<std::vector<size_t>> bad = {{0, 1}, {1, 0}, {0, 1}, {0, 1}};
    CHECK_THROWS_AS(GSet::from_action(&c4, {0, 1}, std::move(bad)), InputError);
}

TEST_CASE("equivariant maps") {
    auto c2 = FiniteGroup::cyclic(2);
    auto free_orbit = GSet::cosets(&c2, {0});
    auto pt = GSet::point(&c2);

    GMap collapse{&free_orbit, &pt, {0, 0}};
    collapse.validate();
    CHECK_FALSE(collapse.is_bijective());

    GMap swap{&free_orbit, &free_orbit, {1, 0}};
    swap.validate();
    CHECK(swap.is_bijective());
    CHECK(GMap::compose(swap, swap).map == GMap::identity(free_orbit).map);

    GMap broken{&free_orbit, &free_orbit, {0, 0}};
    CHECK_THROWS_AS(broken.validate(), InputError);
}

TEST_CASE("pullback of the free C2 orbit over the point") {
    auto c2 = FiniteGroup::cyclic(2);
    auto free_orbit = GSet::cosets(&c2, {0});
    auto pt = GSet::point(&c2);
    GMap w{&free_orbit, &pt, {0, 0}};
    w.validate();

    auto pb = pullback(w, w);
    CHECK(pb.total.size() == 4);
    CHECK(pb.total.orbits().size() == 2);

    // square of the free orbit = two free orbits
    auto two_free = disjoint_union(free_orbit, free_orbit);
    CHECK(pb.total.iso_invariant() == two_free.total.iso_invariant());

    // diagonal points (0,0) and (1,1) form a closed summand
    auto diag = pb.total.restrict_points({0, 3});
    CHECK(diag.iso_invariant() == free_orbit.iso_invariant());
    CHECK_THROWS_AS(pb.total.restrict_points({0}), InputError);
}
