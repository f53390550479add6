// Text format coverage: round-trips for all five document kinds, frozen
// serializations, and line/column positions on malformed input.

#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "psimat/axioms.hpp"
#include "psimat/games.hpp"
#include "psimat/gf.hpp"
#include "psimat/graphs.hpp"
#include "psimat/io.hpp"
#include "psimat/matroid.hpp"
#include "psimat/tom.hpp"

using namespace psimat;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

gf::Vec vec_of(int p, const LabelSet& ambient, const std::map<Label, int>& coords) {
    gf::Vec v = gf::Vec::zero(p, ambient);
    for (const auto& [e, c] : coords) v.set(e, c);
    return v;
}

bool same_presentation(const tom::TreePresentation& a, const tom::TreePresentation& b) {
    return a.prefix == b.prefix && a.root == b.root && a.core == b.core &&
           a.transitions == b.transitions;
}

tom::TreePresentation tiny_loop() {
    const Matroid m = Matroid::from_circuits({"d", "s"}, {{"d", "s"}});
    const Matroid stop = Matroid::from_circuits({"z"}, {{"z"}});
    tom::TreePresentation pres;
    pres.prefix = tom::make_tree({{"r", m}}, {});
    pres.root = "r";
    pres.core.emplace("halt", stop);
    pres.transitions.push_back({"r", "halt", {{"s", "z"}}, 0});
    return pres;
}

tom::TreePresentation forked() {
    const Matroid a = uniform_matroid(2, {"e1", "e2", "i"});
    const Matroid b = uniform_matroid(1, {"i", "e3", "c0"});
    const Matroid odd = uniform_matroid(2, {"in", "out0", "out1"});
    const Matroid even = uniform_matroid(1, {"in", "out0", "out1"});
    tom::TreePresentation pres;
    pres.prefix = tom::make_tree({{"a", a}, {"b", b}}, {{"a", "b"}});
    pres.root = "a";
    pres.core.emplace("odd", odd);
    pres.core.emplace("even", even);
    pres.transitions.push_back({"b", "odd", {{"c0", "in"}}, 1});
    pres.transitions.push_back({"odd", "odd", {{"out0", "in"}}, 1});
    pres.transitions.push_back({"odd", "even", {{"out1", "in"}}, 2});
    pres.transitions.push_back({"even", "odd", {{"out0", "in"}}, 1});
    pres.transitions.push_back({"even", "even", {{"out1", "in"}}, 2});
    return pres;
}

games::RepresentedPresentation rep_wide() {
    games::RepresentedPresentation rp;
    const LabelSet pg = {"a1", "a2", "e"};
    const LabelSet cg = {"b1", "b2", "c1", "c2"};
    rp.prefix = tom::make_representation(
        {{"P", gf::span({vec_of(3, pg, {{"e", 1}, {"a1", 1}, {"a2", 2}})}, 3, pg)}}, {});
    rp.root = "P";
    rp.core.emplace("C", gf::span({vec_of(3, cg, {{"b1", 1}, {"c1", 1}}),
                                   vec_of(3, cg, {{"b2", 1}, {"c2", 1}})},
                                  3, cg));
    rp.transitions.push_back({"P", "C", {{"a1", "b1"}, {"a2", "b2"}}, 0});
    rp.transitions.push_back({"C", "C", {{"c1", "b1"}, {"c2", "b2"}}, 0});
    return rp;
}

games::RepresentedPresentation rep_tgame() {
    games::RepresentedPresentation rp;
    const LabelSet rg = {"c0", "c1", "d0"};
    const LabelSet sg = {"in", "out0", "out1"};
    rp.prefix = tom::make_representation(
        {{"r", gf::span({vec_of(2, rg, {{"d0", 1}, {"c0", 1}}),
                         vec_of(2, rg, {{"c0", 1}, {"c1", 1}})},
                        2, rg)}},
        {});
    rp.root = "r";
    rp.core.emplace("odd",
                    gf::span({vec_of(2, sg, {{"in", 1}, {"out0", 1}, {"out1", 1}})}, 2, sg));
    rp.core.emplace("even", gf::span({vec_of(2, sg, {{"in", 1}, {"out0", 1}}),
                                      vec_of(2, sg, {{"out0", 1}, {"out1", 1}})},
                                     2, sg));
    rp.transitions = graphs::gen_tgame().transitions;
    return rp;
}

std::size_t strategy_lines(const std::string& doc) {
    const std::size_t mark = doc.find("strategy\n");
    REQUIRE(mark != std::string::npos);
    std::size_t n = 0;
    std::size_t pos = mark + 9;
    while (pos < doc.size()) {
        const std::size_t end = doc.find('\n', pos);
        if (end == std::string::npos) break;
        if (end > pos) ++n;
        pos = end + 1;
    }
    return n;
}

}  // namespace

TEST_CASE("matroid documents round-trip through text") {
    SECTION("circuit form serializes to the frozen shape") {
        const Matroid u = uniform_matroid(2, {"a", "b", "c"});
        REQUIRE(io::serialize_matroid("u23", u) ==
                "matroid u23\nground: a b c\ncircuit: a b c\n");
        const io::NamedMatroid back = io::parse_matroid(io::serialize_matroid("u23", u));
        REQUIRE(back.name == "u23");
        REQUIRE(back.matroid == u);
    }

    SECTION("represented form keeps the subspace") {
        const LabelSet g = {"a", "b", "c"};
        const gf::Subspace u = gf::span(
            {vec_of(2, g, {{"a", 1}, {"c", 1}}), vec_of(2, g, {{"b", 1}, {"c", 1}})}, 2, g);
        const Matroid m = Matroid::from_representation(u);
        REQUIRE(io::serialize_matroid("r", m) ==
                "matroid r\nground: a b c\nrep GF(2)\n1 0 1\n0 1 1\n");
        const io::NamedMatroid back = io::parse_matroid(io::serialize_matroid("r", m));
        REQUIRE(back.matroid == m);
        REQUIRE(back.matroid.representation());
        REQUIRE(*back.matroid.representation() == u);
    }

    SECTION("a GF(3) representation survives reduction") {
        const LabelSet g = {"x", "y", "z"};
        const Matroid m = Matroid::from_representation(
            gf::span({vec_of(3, g, {{"x", 2}, {"y", 2}}), vec_of(3, g, {{"y", 1}, {"z", 1}})},
                     3, g));
        const io::NamedMatroid back = io::parse_matroid(io::serialize_matroid("t", m));
        REQUIRE(back.matroid == m);
        REQUIRE(*back.matroid.representation() == *m.representation());
    }

    SECTION("an empty representation is a free matroid") {
        const Matroid m = Matroid::from_representation(gf::Subspace::zero(2, {"a", "b"}));
        REQUIRE(m.circuits().empty());
        const io::NamedMatroid back = io::parse_matroid(io::serialize_matroid("free", m));
        REQUIRE(back.matroid == m);
    }

    SECTION("comments, blank lines, and spacing are immaterial") {
        const std::string doc =
            "# hand-written\n\nmatroid   m    # a triangle\n"
            "  ground:  a b  c\n\ncircuit: a b c   # the only circuit\n";
        REQUIRE(io::parse_matroid(doc).matroid == uniform_matroid(2, {"a", "b", "c"}));
    }
}

TEST_CASE("malformed matroid documents report line and column") {
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid\nground: a\n"), input_error,
        MessageMatches(ContainsSubstring(
            "line 1, column 1: the matroid header needs exactly one name")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\ncircuit: a\n"), input_error,
        MessageMatches(ContainsSubstring(
            "line 2, column 1: matroid 'm' needs its ground line before circuits")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a b\ncircuit: a c\n"), input_error,
        MessageMatches(ContainsSubstring("line 3, column 12: the circuit element 'c' is "
                                         "outside the ground set of matroid 'm'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a\nground: b\n"), input_error,
        MessageMatches(
            ContainsSubstring("line 3, column 1: a second ground line in matroid 'm'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\n"), input_error,
        MessageMatches(ContainsSubstring("line 1, column 1: matroid 'm' has no ground line")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a b\ncircuit: a b\nrep GF(2)\n"), input_error,
        MessageMatches(ContainsSubstring(
            "line 4, column 1: matroid 'm' mixes circuit lines with a representation")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a b\nrep GF(x)\n"), input_error,
        MessageMatches(ContainsSubstring("line 3, column 8: expected a number, got 'x'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a b\nrep GFoo\n"), input_error,
        MessageMatches(ContainsSubstring(
            "line 3, column 5: expected a field tag GF(p), got 'GFoo'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a b c\nrep GF(2)\n1 0\n"), input_error,
        MessageMatches(ContainsSubstring(
            "line 4, column 1: the generator row has 2 entries for 3 ground elements")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a b c\nrep GF(2)\n1 2 0\n"), input_error,
        MessageMatches(
            ContainsSubstring("line 4, column 3: the entry 2 is not a residue mod 2")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a\nfoo bar\n"), input_error,
        MessageMatches(ContainsSubstring("line 3, column 1: unexpected 'foo' in matroid 'm'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a b\ncircuit: a\ncircuit: a b\n"), input_error,
        MessageMatches(ContainsSubstring("in matroid 'm': circuit axiom (C2)")));
    REQUIRE_THROWS_MATCHES(
        io::parse_matroid("matroid m\nground: a b\nrep GF(9)\n1 0\n"), input_error,
        MessageMatches(ContainsSubstring("in matroid 'm': field characteristic must be a "
                                         "prime in [2,251], got 9")));
    REQUIRE_THROWS_MATCHES(io::parse_matroid("graph g\n"), input_error,
                           MessageMatches(ContainsSubstring("no matroid block")));
}

TEST_CASE("system documents round-trip and validate") {
    const SetSystemPair s = system_pair(uniform_matroid(2, {"a", "b", "c"}));
    const std::string doc = io::serialize_system("s", s);
    REQUIRE(doc == "system s\nground: a b c\nC: a b c\nD: a b\nD: a c\nD: b c\n");
    const io::NamedSystem back = io::parse_system(doc);
    REQUIRE(back.name == "s");
    REQUIRE(back.system.ground == s.ground);
    REQUIRE(back.system.c_family == s.c_family);
    REQUIRE(back.system.d_family == s.d_family);

    SECTION("an empty member line encodes the empty set") {
        const io::NamedSystem empty = io::parse_system("system e\nground: a\nC:\n");
        REQUIRE(empty.system.c_family == SetFamily{{}});
        REQUIRE(empty.system.d_family.empty());
    }

    SECTION("malformed systems report line and column") {
        REQUIRE_THROWS_MATCHES(
            io::parse_system("system s\nground: a\nC: b\n"), input_error,
            MessageMatches(ContainsSubstring(
                "line 3, column 4: the element 'b' is outside the ground set of system 's'")));
        REQUIRE_THROWS_MATCHES(
            io::parse_system("system\nground: a\n"), input_error,
            MessageMatches(ContainsSubstring(
                "line 1, column 1: the system header needs exactly one name")));
        REQUIRE_THROWS_MATCHES(
            io::parse_system("system s\nC: a\n"), input_error,
            MessageMatches(ContainsSubstring(
                "line 2, column 1: system 's' needs its ground line before members")));
        REQUIRE_THROWS_MATCHES(
            io::parse_system("system s\nground: a\nwat\n"), input_error,
            MessageMatches(
                ContainsSubstring("line 3, column 1: unexpected 'wat' in system 's'")));
        REQUIRE_THROWS_MATCHES(io::parse_system("matroid m\nground: a\n"), input_error,
                               MessageMatches(ContainsSubstring("no system block")));
    }
}

TEST_CASE("graph documents round-trip with labels and isolation") {
    graphs::Graph g;
    g.add_vertex("z");
    g.add_edge("a", "b");
    g.add_edge("c", "a");
    g.add_edge("b", "c", "e3");
    const std::string doc = io::serialize_graph("g", g);
    REQUIRE(doc == "graph g\nvertex z\nedge a b\nedge a c\nedge b c e3\n");
    const io::NamedGraph back = io::parse_graph(doc);
    REQUIRE(back.name == "g");
    REQUIRE(back.graph == g);

    SECTION("comments and blank lines are skipped") {
        REQUIRE(io::parse_graph("# c\n\ngraph g\nvertex z\nedge a b\nedge a c\nedge b c e3\n")
                    .graph == g);
    }

    SECTION("malformed graphs report line and column") {
        REQUIRE_THROWS_MATCHES(
            io::parse_graph("graph g\nedge a a\n"), input_error,
            MessageMatches(ContainsSubstring(
                "line 2, column 1: graph edges need two distinct endpoints; 'a' repeats")));
        REQUIRE_THROWS_MATCHES(
            io::parse_graph("graph g\nedge a b\nedge b a\n"), input_error,
            MessageMatches(ContainsSubstring(
                "line 3, column 1: vertices 'b' and 'a' are already joined")));
        REQUIRE_THROWS_MATCHES(
            io::parse_graph("graph g\nedge a b x\nedge c d x\n"), input_error,
            MessageMatches(
                ContainsSubstring("line 3, column 1: edge label 'x' is already in use")));
        REQUIRE_THROWS_MATCHES(
            io::parse_graph("graph g\nedge a\n"), input_error,
            MessageMatches(ContainsSubstring("line 2, column 1: an edge line needs two "
                                             "endpoints and at most one label")));
        REQUIRE_THROWS_MATCHES(
            io::parse_graph("graph g\nvertex a b\n"), input_error,
            MessageMatches(ContainsSubstring(
                "line 2, column 1: a vertex line needs exactly one name")));
        REQUIRE_THROWS_MATCHES(io::parse_graph("system s\nground: a\n"), input_error,
                               MessageMatches(ContainsSubstring("no graph block")));
    }
}

TEST_CASE("tree structures round-trip beside their graphs") {
    const graphs::T2K3 t = graphs::gen_t2_k3(1);
    const std::string doc =
        io::serialize_graph("t2k3", t.graph) + io::serialize_tree_structure(t.structure);
    REQUIRE(io::parse_graph(doc).graph == t.graph);
    const io::ParsedStructure ps = io::parse_tree_structure(doc);
    REQUIRE(ps.classes == t.structure.classes);
    REQUIRE(ps.edges == t.structure.edges);
    const graphs::TreeStructure ts = io::realize(ps, t.graph);
    REQUIRE(ts.classes == t.structure.classes);
    REQUIRE(ts.edges == t.structure.edges);

    SECTION("declared tree edges must match the classes") {
        graphs::Graph path;
        path.add_edge("u", "v");
        path.add_edge("v", "w");
        io::ParsedStructure wrong;
        wrong.classes = {{"A", {"u"}}, {"B", {"v"}}, {"C", {"w"}}};
        wrong.edges = {{"A", "C"}};
        REQUIRE_THROWS_MATCHES(
            io::realize(wrong, path), input_error,
            MessageMatches(ContainsSubstring(
                "the declared tree edges do not match the classes; expected {A--B, B--C}")));
    }

    SECTION("malformed structures report line and column") {
        REQUIRE_THROWS_MATCHES(
            io::parse_tree_structure("class a\n"), input_error,
            MessageMatches(
                ContainsSubstring("line 1, column 1: expected 'class name:', got 'a'")));
        REQUIRE_THROWS_MATCHES(
            io::parse_tree_structure("class a: u\nclass a: v\n"), input_error,
            MessageMatches(ContainsSubstring("line 2, column 7: a second class named 'a'")));
        REQUIRE_THROWS_MATCHES(
            io::parse_tree_structure("class a: u\ntedge a\n"), input_error,
            MessageMatches(ContainsSubstring(
                "line 2, column 1: a tedge line needs exactly two class names")));
        REQUIRE_THROWS_MATCHES(
            io::parse_tree_structure("class a: u\ntedge a a\n"), input_error,
            MessageMatches(ContainsSubstring(
                "line 2, column 1: a tree edge joins class 'a' to itself")));
        REQUIRE_THROWS_MATCHES(
            io::parse_tree_structure("class a: u\ntedge a b\n"), input_error,
            MessageMatches(
                ContainsSubstring("the tree edge 'a'--'b' names the unknown class 'b'")));
        REQUIRE_THROWS_MATCHES(
            io::parse_tree_structure("foo\nclass a: u\n"), input_error,
            MessageMatches(ContainsSubstring(
                "line 1, column 1: unexpected 'foo' in the tree structure")));
        REQUIRE_THROWS_MATCHES(
            io::parse_tree_structure("graph g\nedge a b\n"), input_error,
            MessageMatches(ContainsSubstring("no tree structure (no class lines)")));
    }
}

TEST_CASE("presentation documents round-trip through text") {
    SECTION("the recursion presentation survives the trip") {
        const tom::TreePresentation pres = graphs::gen_tgame();
        const std::string doc = io::serialize_presentation("tgame", pres);
        REQUIRE_THAT(doc, ContainsSubstring("real-edges\nd0\n"));
        REQUIRE_THAT(doc, ContainsSubstring("root r"));
        REQUIRE_THAT(doc, ContainsSubstring("r odd c0->in priority: 0"));
        const io::NamedPresentation back = io::parse_presentation(doc);
        REQUIRE(back.name == "tgame");
        REQUIRE(same_presentation(back.presentation, pres));
        REQUIRE(io::serialize_presentation("tgame", back.presentation) == doc);
    }

    SECTION("a branching prefix with priorities survives the trip") {
        const tom::TreePresentation pres = forked();
        const io::NamedPresentation back =
            io::parse_presentation(io::serialize_presentation("forked", pres));
        REQUIRE(same_presentation(back.presentation, pres));
    }

    SECTION("represented presentations keep their subspaces") {
        const games::RepresentedPresentation rp = rep_wide();
        const tom::TreePresentation pres = games::presentation_of(rp);
        const std::string doc = io::serialize_presentation("wide", pres);
        REQUIRE_THAT(doc, ContainsSubstring("rep GF(3)"));
        const io::NamedPresentation back = io::parse_presentation(doc);
        REQUIRE(same_presentation(back.presentation, pres));
        const games::RepresentedPresentation again = games::represent(back.presentation);
        REQUIRE(again.prefix.spaces.at("P") == rp.prefix.spaces.at("P"));
        REQUIRE(again.core.at("C") == rp.core.at("C"));
        REQUIRE(games::solve_vector_game(again, "e", {}, {}).winner() ==
                games::solve_vector_game(rp, "e", {}, {}).winner());
    }

    SECTION("hand-written documents may omit priorities and real edges") {
        const std::string doc =
            "# one node, one loop transition\n"
            "presentation tiny\n"
            "matroid m\nground: d s\ncircuit: d s\n"
            "matroid stop\nground: z\ncircuit: z\n"
            "prefix\nroot r\nnode r m\n"
            "core\nstate halt stop\n"
            "transitions\nr halt s->z\n";
        const io::NamedPresentation back = io::parse_presentation(doc);
        REQUIRE(same_presentation(back.presentation, tiny_loop()));
        REQUIRE(back.presentation.transitions[0].priority == 0);
    }

    SECTION("two states may share one matroid block") {
        const std::string doc =
            "presentation twin\n"
            "matroid m\nground: d s0 s1\ncircuit: d s0\ncircuit: d s1\ncircuit: s0 s1\n"
            "matroid u\nground: z w\ncircuit: z w\n"
            "prefix\nroot r\nnode r m\n"
            "core\nstate h0 u\nstate h1 u\n"
            "transitions\nr h0 s0->z\nr h1 s1->z\nh0 h1 w->z\nh1 h0 w->z\n"
            "real-edges\nd\n";
        const io::NamedPresentation back = io::parse_presentation(doc);
        REQUIRE(back.presentation.core.at("h0") == back.presentation.core.at("h1"));
        REQUIRE(games::real_edges(back.presentation) == LabelSet{"d"});
    }

    SECTION("prefix nodes sharing elements without an edge are rejected in context") {
        const std::string doc =
            "presentation twin\n"
            "matroid u\nground: x y i\ncircuit: x y i\n"
            "prefix\nroot a\nnode a u\nnode b u\n"
            "core\n"
            "transitions\n";
        REQUIRE_THROWS_MATCHES(io::parse_presentation(doc), input_error,
                               MessageMatches(ContainsSubstring("in presentation 'twin'")));
    }
}

TEST_CASE("malformed presentations report their defect") {
    const std::string head =
        "presentation p\n"
        "matroid m\nground: d s\ncircuit: d s\n"
        "matroid stop\nground: z\ncircuit: z\n";
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head + "prefix\nroot r\nnode r mx\n"), input_error,
        MessageMatches(ContainsSubstring("column 8: unknown matroid 'mx'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head + "prefix\nroot r\nroot q\nnode r m\n"), input_error,
        MessageMatches(ContainsSubstring("a second root line")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head + "prefix\nroot r\nnode r m\nedge r q\n"), input_error,
        MessageMatches(ContainsSubstring("the edge endpoint 'q' is not a declared node")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head + "prefix\nroot r\nnode r m\ntransitions\nr halt sz\n"),
        input_error,
        MessageMatches(ContainsSubstring("expected 'source->target', got 'sz'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head +
                               "prefix\nroot r\nnode r m\ncore\nstate halt stop\n"
                               "transitions\nr halt s->z priority: x\n"),
        input_error, MessageMatches(ContainsSubstring("expected a number, got 'x'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head +
                               "prefix\nroot r\nnode r m\ncore\nstate halt stop\n"
                               "transitions\nr halt s->z priority: 0 extra\n"),
        input_error, MessageMatches(ContainsSubstring("unexpected tokens after the priority")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head +
                               "prefix\nroot r\nnode r m\ncore\nstate halt stop\n"
                               "transitions\nr halt s->z\nreal-edges\nd s\n"),
        input_error,
        MessageMatches(ContainsSubstring(
            "the declared real edges {d,s} do not match the presentation's {d}")));
    REQUIRE_THROWS_MATCHES(io::parse_presentation("graph g\nedge a b\n"), input_error,
                           MessageMatches(ContainsSubstring("no presentation block")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation("presentation p\nmatroid m\nground: d\ncircuit: d\n"
                               "prefix\nnode r m\n"),
        input_error, MessageMatches(ContainsSubstring("presentation 'p' declares no root")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation("presentation p\nprefix\nroot r\n"), input_error,
        MessageMatches(ContainsSubstring("presentation 'p' declares no prefix nodes")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head + "prefix\nroot r\nnode r m\n"
                                      "transitions\nr halt s->z\n"),
        input_error, MessageMatches(ContainsSubstring("in presentation 'p'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head + "matroid m\nground: q\ncircuit: q\n"), input_error,
        MessageMatches(ContainsSubstring("a second matroid named 'm'")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head + "prefix\nstate halt stop\n"), input_error,
        MessageMatches(ContainsSubstring("unexpected 'state' in the prefix section")));
    REQUIRE_THROWS_MATCHES(
        io::parse_presentation(head + "node r m\n"), input_error,
        MessageMatches(ContainsSubstring("unexpected 'node' before any section")));
}

TEST_CASE("witness documents stay valid presentations") {
    const tom::TreePresentation pres = graphs::gen_tgame();
    const games::GameOutcome out = games::solve_circuit_game(pres, "d0", {}, {});
    REQUIRE(out.winner() == games::Player::sarah);
    const std::string doc = io::serialize_witness("tgame", pres, out);
    REQUIRE(strategy_lines(doc) == 3);
    const bool picks_c0 = doc.find("r d0 0 : c0 d0\n") != std::string::npos;
    const bool picks_c1 = doc.find("r d0 0 : c1 d0\n") != std::string::npos;
    REQUIRE((picks_c0 || picks_c1));
    const io::NamedPresentation back = io::parse_presentation(doc);
    REQUIRE(same_presentation(back.presentation, pres));
    REQUIRE(io::serialize_witness("tgame", pres, out) == doc);

    SECTION("vector witnesses carry coordinate replies") {
        const games::RepresentedPresentation rp = rep_tgame();
        const games::VectorOutcome vout = games::solve_vector_game(rp, "d0", {}, {});
        REQUIRE(vout.winner() == games::Player::sarah);
        const std::string vdoc = io::serialize_vector_witness("tgame", rp, vout);
        REQUIRE(strategy_lines(vdoc) >= 1);
        REQUIRE_THAT(vdoc, ContainsSubstring("r - d0:1 0 : "));
        const io::NamedPresentation vback = io::parse_presentation(vdoc);
        REQUIRE(same_presentation(vback.presentation, games::presentation_of(rp)));
        REQUIRE(vback.presentation.prefix.nodes.at("r").representation());
    }
}
