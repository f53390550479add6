#include <catch2/catch_amalgamated.hpp>

#include <psimat/graphs.hpp>

#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oracle_support.hpp"

using namespace psimat;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

graphs::Graph path_graph(int n) {
    graphs::Graph g;
    g.add_vertex("v1");
    for (int i = 2; i <= n; ++i) g.add_edge("v" + std::to_string(i - 1), "v" + std::to_string(i));
    return g;
}

graphs::Graph cycle_graph(int n) {
    graphs::Graph g = path_graph(n);
    g.add_edge("v1", "v" + std::to_string(n));
    return g;
}

graphs::Graph complete_graph(int n) {
    graphs::Graph g;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) g.add_edge("v" + std::to_string(i), "v" + std::to_string(j));
    return g;
}

graphs::Graph k23() {
    graphs::Graph g;
    for (const Label a : {"a1", "a2"})
        for (const Label b : {"b1", "b2", "b3"}) g.add_edge(a, b);
    return g;
}

// Two triangles joined by a perfect matching.
graphs::Graph prism() {
    graphs::Graph g;
    for (const Label v : {"x1", "x2", "x3"}) g.add_edge(v, v + std::string("p"));
    g.add_edge("x1", "x2");
    g.add_edge("x2", "x3");
    g.add_edge("x1", "x3");
    g.add_edge("x1p", "x2p");
    g.add_edge("x2p", "x3p");
    g.add_edge("x1p", "x3p");
    return g;
}

graphs::Graph grid3() {
    graphs::Graph g;
    const auto at = [](int r, int c) { return "g" + std::to_string(r) + std::to_string(c); };
    for (int r = 1; r <= 3; ++r)
        for (int c = 1; c <= 3; ++c) {
            if (c < 3) g.add_edge(at(r, c), at(r, c + 1));
            if (r < 3) g.add_edge(at(r, c), at(r + 1, c));
        }
    return g;
}

// The ladder over a path: every class pairs a vertex with its primed copy.
graphs::Graph ladder(int n) {
    return graphs::gen_t_k2(path_graph(n), "v1", n);
}

graphs::TreeStructure pair_classes(const graphs::Graph& g, int n) {
    std::map<Label, LabelSet> classes;
    for (int i = 1; i <= n; ++i) {
        const Label v = "v" + std::to_string(i);
        classes[Label("t") + std::to_string(i)] = {v, v + "'"};
    }
    return graphs::make_tree_structure(g, classes);
}

LabelSet u_labels_with_prefix(const graphs::Graph& u, const std::string& prefix) {
    LabelSet out;
    for (const auto& [lbl, ends] : u.edges)
        if (lbl.rfind(prefix, 0) == 0) out.insert(lbl);
    return out;
}

// Random walk that never repeats an edge label; vertex repeats are fine.
std::vector<Label> random_trail(const graphs::Graph& g, std::mt19937& rng, int max_len) {
    std::vector<Label> verts(g.vertices.begin(), g.vertices.end());
    std::uniform_int_distribution<std::size_t> start(0, verts.size() - 1);
    std::vector<Label> walk{verts[start(rng)]};
    LabelSet used;
    for (int step = 0; step < max_len; ++step) {
        std::vector<std::pair<Label, Label>> options;  // edge label, next vertex
        for (const auto& w : g.neighbors(walk.back())) {
            const Label lbl = *g.edge_between(walk.back(), w);
            if (!used.count(lbl)) options.push_back({lbl, w});
        }
        if (options.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
        const auto& [lbl, w] = options[pick(rng)];
        used.insert(lbl);
        walk.push_back(w);
    }
    return walk;
}

struct GluingInstance {
    std::string name;
    graphs::Graph graph;
    graphs::TreeStructure structure;
};

std::vector<GluingInstance> gluing_corpus() {
    std::vector<GluingInstance> out;

    graphs::Graph edge_tree;
    edge_tree.add_edge("u", "v");
    graphs::Graph square = graphs::gen_t_k2(edge_tree, "u", 1);
    out.push_back({"edge ladder",
                   square,
                   graphs::make_tree_structure(square, {{"tu", {"u", "u'"}}, {"tv", {"v", "v'"}}})});

    out.push_back({"three-rung ladder", ladder(3), pair_classes(ladder(3), 3)});
    out.push_back({"four-rung ladder", ladder(4), pair_classes(ladder(4), 4)});

    graphs::Graph star;
    star.add_edge("c", "x");
    star.add_edge("c", "y");
    star.add_edge("c", "z");
    graphs::Graph star_ladder = graphs::gen_t_k2(star, "c", 1);
    std::map<Label, LabelSet> star_classes;
    for (const Label v : {"c", "x", "y", "z"})
        star_classes[Label("t") + v] = {v, v + "'"};
    out.push_back({"star ladder", star_ladder, graphs::make_tree_structure(star_ladder, star_classes)});

    auto tk = graphs::gen_t2_k3(1);
    out.push_back({"depth-one triangle product", tk.graph, tk.structure});

    return out;
}

}  // namespace

TEST_CASE("graphs hold labelled edges with simple-graph validation") {
    graphs::Graph g;
    g.add_edge("a", "b");
    g.add_edge("b", "c", "bc");
    g.add_vertex("lonely");

    REQUIRE(g.vertices == LabelSet{"a", "b", "c", "lonely"});
    REQUIRE(g.edge_labels() == LabelSet{"a-b", "bc"});
    REQUIRE(g.adjacent("a", "b"));
    REQUIRE_FALSE(g.adjacent("a", "c"));
    REQUIRE(g.edge_between("b", "c") == Label("bc"));
    REQUIRE_FALSE(g.edge_between("a", "c").has_value());
    REQUIRE(g.neighbors("b") == LabelSet{"a", "c"});
    REQUIRE(g.degree("b") == 2);
    REQUIRE(g.endpoints("bc") == std::pair<Label, Label>{"b", "c"});

    REQUIRE_FALSE(g.connected());
    REQUIRE(g.components().size() == 2);
    REQUIRE(g.induced({"a", "b", "lonely"}).edge_labels() == LabelSet{"a-b"});

    REQUIRE(g.is_walk({"a", "b", "c"}));
    REQUIRE_FALSE(g.is_walk({"a", "c"}));
    REQUIRE_FALSE(g.is_walk({}));
    REQUIRE(g.repeats_edge({"a", "b", "a"}));
    REQUIRE_FALSE(g.repeats_edge({"a", "b", "c"}));

    REQUIRE_THROWS_MATCHES(g.add_edge("a", "a"), input_error,
                           MessageMatches(ContainsSubstring("distinct endpoints")));
    REQUIRE_THROWS_MATCHES(g.add_edge("b", "a"), input_error,
                           MessageMatches(ContainsSubstring("already joined")));
    REQUIRE_THROWS_MATCHES(g.add_edge("c", "lonely", "bc"), input_error,
                           MessageMatches(ContainsSubstring("already in use")));
    REQUIRE_THROWS_MATCHES(g.endpoints("zz"), input_error,
                           MessageMatches(ContainsSubstring("unknown edge")));
}

TEST_CASE("depth-first spanning trees are normal") {
    const auto p4 = path_graph(4);
    const auto chain = graphs::normal_spanning_tree(p4, "v1");
    REQUIRE(chain.tree_edges == p4.edge_labels());
    REQUIRE(chain.depth.at("v4") == 3);
    REQUIRE(chain.parent.at("v4") == Label("v3"));
    REQUIRE(chain.parent.count("v1") == 0);

    // On a four-cycle the search walks around and the chord stays comparable.
    graphs::Graph c4;
    c4.add_edge("a", "b");
    c4.add_edge("b", "c");
    c4.add_edge("c", "d");
    c4.add_edge("a", "d");
    const auto around = graphs::normal_spanning_tree(c4, "a");
    REQUIRE(around.tree_edges == LabelSet{"a-b", "b-c", "c-d"});
    REQUIRE(around.depth.at("d") == 3);
    REQUIRE(graphs::is_normal(c4, around));

    // A star-shaped spanning tree of the same cycle is not normal: the two
    // branch tips are joined by the edge c-d but neither lies above the other.
    const auto star = graphs::make_tree_order(c4, "a", {"a-b", "b-c", "a-d"});
    REQUIRE_FALSE(graphs::is_normal(c4, star));

    graphs::Graph split;
    split.add_vertex("p");
    split.add_vertex("q");
    REQUIRE_THROWS_MATCHES(graphs::normal_spanning_tree(split, "p"), input_error,
                           MessageMatches(ContainsSubstring("disconnected")));
    REQUIRE_THROWS_MATCHES(graphs::normal_spanning_tree(p4, "v9"), input_error,
                           MessageMatches(ContainsSubstring("unknown vertex")));
    REQUIRE_THROWS_MATCHES(graphs::make_tree_order(c4, "a", {"a-b", "b-c"}), input_error,
                           MessageMatches(ContainsSubstring("spanning tree")));
    REQUIRE_THROWS_MATCHES(graphs::make_tree_order(c4, "a", {"a-b", "b-c", "c-d", "a-d"}),
                           input_error, MessageMatches(ContainsSubstring("spanning tree")));

    // Every depth-first tree in the corpus passes the exhaustive edge check.
    for (const auto& g : {path_graph(4), c4, complete_graph(4), cycle_graph(5), cycle_graph(6),
                          k23(), prism(), grid3()})
        for (const auto& root : g.vertices)
            REQUIRE(graphs::is_normal(g, graphs::normal_spanning_tree(g, root)));

    // A cycle has one spanning tree per dropped edge, each a path; the rooted
    // tree is normal exactly when the root is an end of that path.
    const auto c5 = cycle_graph(5);
    const auto trees = oracle::all_spanning_trees(oracle::to_edge_list(c5));
    REQUIRE(trees.size() == 5);
    int normal_count = 0;
    for (const auto& t : trees)
        for (const auto& root : c5.vertices)
            if (graphs::is_normal(c5, graphs::make_tree_order(c5, root, t))) ++normal_count;
    REQUIRE(normal_count == 10);
}

TEST_CASE("tree orders answer comparability, closures and paths") {
    graphs::Graph c4;
    c4.add_edge("a", "b");
    c4.add_edge("b", "c");
    c4.add_edge("c", "d");
    c4.add_edge("a", "d");
    const auto order = graphs::make_tree_order(c4, "a", {"a-b", "b-c", "a-d"});

    REQUIRE(order.leq("a", "c"));
    REQUIRE(order.leq("b", "c"));
    REQUIRE_FALSE(order.leq("c", "b"));
    REQUIRE_FALSE(order.comparable("c", "d"));
    REQUIRE(order.comparable("a", "d"));
    REQUIRE(order.leq("c", "c"));

    REQUIRE(order.down_closure({}) == LabelSet{});
    REQUIRE(order.down_closure({"c"}) == LabelSet{"a", "b", "c"});
    REQUIRE(order.down_closure({"c", "d"}) == LabelSet{"a", "b", "c", "d"});

    REQUIRE(order.minima_outside({}) == LabelSet{"a"});
    REQUIRE(order.minima_outside({"a"}) == LabelSet{"b", "d"});
    REQUIRE(order.minima_outside({"a", "b"}) == LabelSet{"c", "d"});
    REQUIRE(order.minima_outside({"b"}) == LabelSet{"a"});
    REQUIRE(order.minima_outside(c4.vertices) == LabelSet{});

    REQUIRE(order.tree_path("c", "d") == std::vector<Label>{"c", "b", "a", "d"});
    REQUIRE(order.tree_path("d", "b") == std::vector<Label>{"d", "a", "b"});
    REQUIRE(order.tree_path("b", "b") == std::vector<Label>{"b"});
    REQUIRE(order.tree_path("a", "c") == std::vector<Label>{"a", "b", "c"});

    REQUIRE_THROWS_MATCHES(order.tree_path("a", "zz"), input_error,
                           MessageMatches(ContainsSubstring("unknown vertex")));
    REQUIRE_THROWS_MATCHES(order.down_closure({"zz"}), input_error,
                           MessageMatches(ContainsSubstring("unknown vertex")));
}

TEST_CASE("normal trees induce tree structures by repeated closure") {
    // On a path the recursion peels one vertex per round.
    const auto p4 = path_graph(4);
    const auto chain = graphs::tree_structure_from_nst(p4, graphs::normal_spanning_tree(p4, "v1"));
    REQUIRE(chain.classes ==
            std::map<Label, LabelSet>{
                {"v1", {"v1"}}, {"v2", {"v2"}}, {"v3", {"v3"}}, {"v4", {"v4"}}});
    REQUIRE(chain.edges == std::set<std::pair<Label, Label>>{
                               {"v1", "v2"}, {"v2", "v3"}, {"v3", "v4"}});

    // On a cycle the chord forces everything above the root into one class.
    graphs::Graph c4;
    c4.add_edge("a", "b");
    c4.add_edge("b", "c");
    c4.add_edge("c", "d");
    c4.add_edge("a", "d");
    const auto split = graphs::tree_structure_from_nst(c4, graphs::normal_spanning_tree(c4, "a"));
    REQUIRE(split.classes == std::map<Label, LabelSet>{{"a", {"a"}}, {"b", {"b", "c", "d"}}});
    REQUIRE(split.edges == std::set<std::pair<Label, Label>>{{"a", "b"}});
    REQUIRE(split.class_of("d") == Label("b"));

    // A star splits into its center plus one class per leaf.
    graphs::Graph star;
    star.add_edge("c", "l1");
    star.add_edge("c", "l2");
    star.add_edge("c", "l3");
    const auto burst = graphs::tree_structure_from_nst(star, graphs::normal_spanning_tree(star, "c"));
    REQUIRE(burst.classes.size() == 4);
    REQUIRE(burst.classes.at("c") == LabelSet{"c"});
    REQUIRE(burst.classes.at("l2") == LabelSet{"l2"});

    // Denser graphs still come out as partitions into connected classes.
    for (const auto& g : {complete_graph(4), prism(), grid3(), k23()}) {
        const auto ts = graphs::tree_structure_from_nst(g, graphs::normal_spanning_tree(g, *g.vertices.begin()));
        LabelSet seen;
        for (const auto& [name, members] : ts.classes) {
            for (const auto& v : members) {
                REQUIRE(seen.count(v) == 0);
                seen.insert(v);
            }
            REQUIRE(g.induced(members).connected());
        }
        REQUIRE(seen == g.vertices);
    }

    const auto bad = graphs::make_tree_order(c4, "a", {"a-b", "b-c", "a-d"});
    REQUIRE_THROWS_MATCHES(graphs::tree_structure_from_nst(c4, bad), input_error,
                           MessageMatches(ContainsSubstring("not normal")));
}

TEST_CASE("tree structure construction validates the partition") {
    const auto p4 = path_graph(4);

    REQUIRE_THROWS_MATCHES(
        graphs::make_tree_structure(p4, {{"s", {"v1", "v2"}}, {"t", {"v2", "v3", "v4"}}}),
        input_error, MessageMatches(ContainsSubstring("appears in classes")));
    REQUIRE_THROWS_MATCHES(graphs::make_tree_structure(p4, {{"s", {"v1", "v2"}}}), input_error,
                           MessageMatches(ContainsSubstring("do not cover")));
    REQUIRE_THROWS_MATCHES(
        graphs::make_tree_structure(p4, {{"s", {"v1", "v2"}}, {"t", {"v3", "v4", "v9"}}}),
        input_error, MessageMatches(ContainsSubstring("unknown vertices")));
    REQUIRE_THROWS_MATCHES(
        graphs::make_tree_structure(p4, {{"s", {"v1", "v3"}}, {"t", {"v2", "v4"}}}), input_error,
        MessageMatches(ContainsSubstring("connected")));
    REQUIRE_THROWS_MATCHES(
        graphs::make_tree_structure(p4, {{"s", {}}, {"t", p4.vertices}}), input_error,
        MessageMatches(ContainsSubstring("empty")));
    REQUIRE_THROWS_MATCHES(
        graphs::make_tree_structure(complete_graph(3),
                                    {{"s", {"v1"}}, {"t", {"v2"}}, {"u", {"v3"}}}),
        input_error, MessageMatches(ContainsSubstring("form a tree")));

    const auto ok = graphs::make_tree_structure(p4, {{"low", {"v1", "v2"}}, {"high", {"v3", "v4"}}});
    REQUIRE(ok.edges == std::set<std::pair<Label, Label>>{{"high", "low"}});
    REQUIRE(graphs::cross_edges(p4, ok, "low", "high") == LabelSet{"v2-v3"});
    REQUIRE_FALSE(graphs::width_two(p4, ok));
}

TEST_CASE("torsos keep interior edges and glue ports for leaving edges") {
    const auto g = ladder(3);
    const auto ts = pair_classes(g, 3);
    REQUIRE(graphs::width_two(g, ts));

    const auto middle = graphs::torso(g, ts, "t2");
    REQUIRE(middle.internal_edges == LabelSet{"v2-v2'"});
    REQUIRE(middle.pendant_edges ==
            LabelSet{"v1-v2:v2", "v1'-v2':v2'", "v2-v3:v2", "v2'-v3':v2'"});
    REQUIRE(middle.dummy_edges == LabelSet{"v1'-v2'~v1-v2", "v2'-v3'~v2-v3"});
    REQUIRE(middle.graph.vertices.size() == 6);
    REQUIRE(middle.graph.edges.size() == 7);

    const SetFamily middle_cycles = graphs::simple_cycles(middle.graph);
    const LabelSet left{"v2-v2'", "v1-v2:v2", "v1'-v2'~v1-v2", "v1'-v2':v2'"};
    const LabelSet right{"v2-v2'", "v2-v3:v2", "v2'-v3'~v2-v3", "v2'-v3':v2'"};
    const LabelSet around = set_minus(set_union(left, right), LabelSet{"v2-v2'"});
    REQUIRE(middle_cycles == SetFamily{left, right, around});

    const auto end = graphs::torso(g, ts, "t1");
    REQUIRE(end.graph.edges.size() == 4);
    REQUIRE(graphs::simple_cycles(end.graph) ==
            SetFamily{{"v1-v1'", "v1-v2:v1", "v1'-v2'~v1-v2", "v1'-v2':v1'"}});

    REQUIRE(graphs::bond_dummy_bound(middle, 2));
    REQUIRE(graphs::circuit_dummy_bound(middle, 2));
    REQUIRE_FALSE(graphs::circuit_dummy_bound(middle, 1));

    // Splitting a complete graph into two fat classes piles dummies onto one
    // port, so the two-dummy bound fails.
    const auto k4 = complete_graph(4);
    const auto fat = graphs::make_tree_structure(
        k4, {{"lo", {"v1", "v2"}}, {"hi", {"v3", "v4"}}});
    const auto lo = graphs::torso(k4, fat, "lo");
    REQUIRE(lo.dummy_edges.size() == 6);
    REQUIRE_FALSE(graphs::bond_dummy_bound(lo, 2));
    REQUIRE(graphs::bond_dummy_bound(lo, 4));

    REQUIRE_THROWS_MATCHES(graphs::torso(g, ts, "t9"), input_error,
                           MessageMatches(ContainsSubstring("unknown class")));
}

TEST_CASE("width-two structures glue their torsos to the subdivided graph") {
    for (const auto& inst : gluing_corpus()) {
        INFO(inst.name);
        REQUIRE(graphs::width_two(inst.graph, inst.structure));

        const auto tree = graphs::tree_of_matroids(inst.graph, inst.structure);
        REQUIRE(tree.overlap_one());

        const auto split = graphs::subdivide_interfaces(inst.graph, inst.structure);
        REQUIRE(split.edge_labels() == tree.ground());

        const auto el = oracle::to_edge_list(split);
        const auto glued = tom::enumerate_circuits(tree);
        REQUIRE(glued.minimal == oracle::graph_cycles(el));
        REQUIRE(glued.circuits == glued.minimal);

        const auto coglued = tom::enumerate_circuits(tom::dual(tree));
        REQUIRE(coglued.minimal == oracle::graph_bonds(el));
        REQUIRE(coglued.circuits == coglued.minimal);
    }
}

TEST_CASE("binary representations carry the torso cycle spaces") {
    for (const auto& inst : gluing_corpus()) {
        if (inst.graph.edges.size() > 8) continue;  // keep the vector sweeps small
        INFO(inst.name);

        const auto rep = graphs::binary_representation(inst.graph, inst.structure);
        REQUIRE(tom::tree_of(rep) == graphs::tree_of_matroids(inst.graph, inst.structure));

        const auto split = graphs::subdivide_interfaces(inst.graph, inst.structure);
        const auto space = oracle::cycle_space_gf2(oracle::to_edge_list(split));

        SetFamily vector_supports;
        for (const auto& v : tom::enumerate_psi_vectors(rep)) {
            const LabelSet s = tom::vector_support(rep, v);
            if (!s.empty()) vector_supports.insert(s);
        }
        SetFamily space_supports;
        for (const auto& w : gf::enumerate_vectors(space))
            if (!w.is_zero()) space_supports.insert(w.support());

        REQUIRE(vector_supports == space_supports);
        REQUIRE(minimal_members(vector_supports) == oracle::graph_cycles(oracle::to_edge_list(split)));
    }
}

TEST_CASE("the vertex-pair expansion pairs every vertex with every tree node") {
    const auto p3 = path_graph(3);
    const auto order = graphs::normal_spanning_tree(p3, "v1");
    const auto u = graphs::undomination_graph(p3, order);

    REQUIRE(u.vertices.size() == 9);
    REQUIRE(u.vertices.count("v1|v3") == 1);
    REQUIRE(u_labels_with_prefix(u, "g:").size() == 2);
    REQUIRE(u_labels_with_prefix(u, "t:").size() == 6);
    REQUIRE(u.adjacent("v1|v2", "v2|v1"));
    REQUIRE(u.adjacent("v1|v1", "v1|v2"));
    REQUIRE_FALSE(u.adjacent("v1|v1", "v2|v2"));
    REQUIRE_FALSE(u.adjacent("v1|v3", "v3|v1"));

    // Each expanded vertex meets at most one crossing edge.
    const auto k4 = complete_graph(4);
    const auto uk = graphs::undomination_graph(k4, graphs::normal_spanning_tree(k4, "v1"));
    REQUIRE(uk.vertices.size() == 16);
    REQUIRE(u_labels_with_prefix(uk, "g:").size() == 6);
    REQUIRE(u_labels_with_prefix(uk, "t:").size() == 12);
    std::map<Label, int> crossing_ends;
    for (const auto& [lbl, ends] : uk.edges)
        if (lbl.rfind("g:", 0) == 0) {
            ++crossing_ends[ends.first];
            ++crossing_ends[ends.second];
        }
    for (const auto& [v, count] : crossing_ends) REQUIRE(count == 1);

    graphs::Graph bad;
    bad.add_edge("a|x", "b");
    REQUIRE_THROWS_MATCHES(
        graphs::undomination_graph(bad, graphs::normal_spanning_tree(bad, "b")), input_error,
        MessageMatches(ContainsSubstring("'|'")));
    REQUIRE_THROWS_MATCHES(graphs::undomination_graph(k4, order), input_error,
                           MessageMatches(ContainsSubstring("spanning tree")));
}

TEST_CASE("walks translate back and forth between a graph and its expansion") {
    const auto p3 = path_graph(3);
    const auto p3_order = graphs::normal_spanning_tree(p3, "v1");
    REQUIRE(graphs::walk_u(p3, p3_order, {"v1", "v2"}, "v2", "v3") ==
            std::vector<Label>{"v1|v2", "v2|v1", "v2|v2", "v2|v3"});
    REQUIRE(graphs::walk_g(p3, {"v1|v2", "v2|v1", "v2|v2", "v2|v3"}) ==
            std::vector<Label>{"v1", "v2"});
    REQUIRE(graphs::walk_u(p3, p3_order, {"v2"}, "v1", "v3") ==
            std::vector<Label>{"v2|v1", "v2|v2", "v2|v3"});

    std::mt19937 rng(424242);
    for (const auto& g : {complete_graph(4), grid3()}) {
        const auto order = graphs::normal_spanning_tree(g, *g.vertices.begin());
        const auto u = graphs::undomination_graph(g, order);
        const std::vector<Label> verts(g.vertices.begin(), g.vertices.end());
        std::uniform_int_distribution<std::size_t> vpick(0, verts.size() - 1);

        int bad_round_trips = 0;
        for (int i = 0; i < 250; ++i) {
            const auto walk = random_trail(g, rng, 12);
            const Label from = verts[vpick(rng)];
            const Label to = verts[vpick(rng)];
            const auto lifted = graphs::walk_u(g, order, walk, from, to);
            if (!u.is_walk(lifted)) ++bad_round_trips;
            if (graphs::walk_g(g, lifted) != walk) ++bad_round_trips;
        }
        for (int i = 0; i < 250; ++i) {
            const auto uwalk = random_trail(u, rng, 12);
            const auto dropped = graphs::walk_g(g, uwalk);
            const Label from = uwalk.front().substr(uwalk.front().find('|') + 1);
            const Label to = uwalk.back().substr(uwalk.back().find('|') + 1);
            if (graphs::walk_u(g, order, dropped, from, to) != uwalk) ++bad_round_trips;
        }
        REQUIRE(bad_round_trips == 0);
    }

    REQUIRE_THROWS_MATCHES(graphs::walk_u(p3, p3_order, {"v1", "v3"}, "v1", "v1"), input_error,
                           MessageMatches(ContainsSubstring("not a walk")));
    REQUIRE_THROWS_MATCHES(graphs::walk_g(p3, {"v1|v1", "v2|v2"}), input_error,
                           MessageMatches(ContainsSubstring("not a walk")));
}

TEST_CASE("separators of the graph separate the expansion layer by layer") {
    // For every spanning tree, every separator X and every pair split by X,
    // the block of expanded vertices with both coordinates in X separates the
    // corresponding layers.
    for (const auto& g : {cycle_graph(5), cycle_graph(6), complete_graph(4), k23(), prism()}) {
        const auto el = oracle::to_edge_list(g);
        int violations = 0;
        for (const auto& t : oracle::all_spanning_trees(el)) {
            const auto order = graphs::make_tree_order(g, *g.vertices.begin(), t);
            const auto u = graphs::undomination_graph(g, order);
            for_each_subset(g.vertices, [&](const LabelSet& x) {
                if (x.size() == g.vertices.size()) return;
                const auto parts = g.induced(set_minus(g.vertices, x)).components();
                if (parts.size() < 2) return;

                LabelSet keep = u.vertices;
                for (const auto& a : x)
                    for (const auto& b : x) keep.erase(a + "|" + b);
                const auto blocks = u.induced(keep).components();
                std::map<Label, std::size_t> block_of;
                for (std::size_t b = 0; b < blocks.size(); ++b)
                    for (const auto& vertex : blocks[b]) block_of[vertex] = b;

                std::map<Label, std::size_t> part_of;
                for (std::size_t p = 0; p < parts.size(); ++p)
                    for (const auto& vertex : parts[p]) part_of[vertex] = p;

                for (const auto& v : g.vertices) {
                    if (x.count(v)) continue;
                    for (const auto& w : g.vertices) {
                        if (w <= v || x.count(w)) continue;
                        if (part_of.at(v) == part_of.at(w)) continue;
                        for (const auto& s : g.vertices)
                            for (const auto& tt : g.vertices) {
                                const auto a = block_of.find(v + "|" + s);
                                const auto b = block_of.find(w + "|" + tt);
                                if (a == block_of.end() || b == block_of.end()) continue;
                                if (a->second == b->second) ++violations;
                            }
                    }
                }
            });
        }
        REQUIRE(violations == 0);
    }
}

TEST_CASE("product generators produce the advertised shapes") {
    graphs::Graph edge_tree;
    edge_tree.add_edge("u", "v");
    graphs::Graph expected;
    expected.add_edge("u", "v");
    expected.add_edge("u'", "v'");
    expected.add_edge("u", "u'");
    expected.add_edge("v", "v'");
    REQUIRE(graphs::gen_t_k2(edge_tree, "u", 1) == expected);

    // Truncation drops everything deeper than the requested radius.
    const auto short_ladder = graphs::gen_t_k2(path_graph(4), "v1", 1);
    REQUIRE(short_ladder.vertices == LabelSet{"v1", "v1'", "v2", "v2'"});
    REQUIRE(short_ladder.edges.size() == 4);
    REQUIRE_THROWS_MATCHES(graphs::gen_t_k2(cycle_graph(4), "v1", 2), input_error,
                           MessageMatches(ContainsSubstring("must be a tree")));

    const auto spine = graphs::gen_degree_tree(4);
    REQUIRE(spine.connected());
    REQUIRE(spine.edges.size() + 1 == spine.vertices.size());
    REQUIRE(spine.vertices.size() == 12);
    REQUIRE(spine.degree("w2") == 2);
    REQUIRE(spine.degree("w3") == 3);
    REQUIRE(spine.degree("w4") == 4);
    REQUIRE(spine.degree("w5") == 5);
    REQUIRE(spine.degree("w6") == 1);  // its leaves lie beyond the radius

    const auto colors = graphs::gen_coloring(3);
    REQUIRE(colors.at("s0") == 0);
    REQUIRE(colors.at("s1") == 0);
    REQUIRE(std::set<int>{colors.at("s00"), colors.at("s01")} == std::set<int>{1, 2});
    REQUIRE(colors.at("s000") == colors.at("s00"));
    REQUIRE(colors.at("s001") == colors.at("s00"));
    for (const auto& [child, c] : colors) {
        if (child.size() >= 4) continue;  // needs both grandchildren in range
        const int left = colors.at(child + "0");
        const int right = colors.at(child + "1");
        if ((child.size() - 1) % 2 == 1) {
            REQUIRE(std::set<int>{c, left, right} == std::set<int>{0, 1, 2});
        } else {
            REQUIRE(left == c);
            REQUIRE(right == c);
        }
    }

    const auto tk = graphs::gen_t2_k3(2);
    REQUIRE(tk.graph.vertices.size() == 21);
    REQUIRE(tk.graph.edges.size() == 33);
    REQUIRE(tk.structure.classes.size() == 7);
    REQUIRE(tk.structure.classes.at("s") == LabelSet{"s_0", "s_1", "s_2"});
    REQUIRE(graphs::width_two(tk.graph, tk.structure));
    REQUIRE(graphs::cross_edges(tk.graph, tk.structure, "s", "s0") ==
            LabelSet{"s0_1-s_1", "s0_2-s_2"});

    const auto game = graphs::gen_tgame();
    REQUIRE_NOTHROW(tom::validate_presentation(game));
    REQUIRE(tom::unfold(game, 0).boundary == LabelSet{"c0", "c1"});
    REQUIRE(set_minus(tom::unfold(game, 2).ground(), tom::unfold(game, 2).boundary) ==
            LabelSet{"d0"});
    REQUIRE(tom::unfold(game, 2).nodes.size() == 7);
    for (const auto& t : game.transitions) REQUIRE(t.priority == 0);
}

TEST_CASE("one ladder rung sits in as many squares as its spine degree") {
    const auto tree = graphs::gen_degree_tree(8);
    const auto g = graphs::gen_t_k2(tree, "w2", 8);
    const auto el = oracle::to_edge_list(g);

    for (int n = 2; n <= 5; ++n) {
        const Label v = "w" + std::to_string(n);
        const auto rung = g.edge_between(v, v + "'");
        REQUIRE(rung.has_value());
        REQUIRE(oracle::four_cycles_at(el, *rung) == static_cast<std::size_t>(n));
    }

    // Every rung lies in one square per tree edge at its vertex; every copy
    // of a tree edge lies in exactly its own square.
    int off_model = 0;
    for (const auto& [lbl, ends] : g.edges) {
        const std::size_t squares = oracle::four_cycles_at(el, lbl);
        if (ends.second == ends.first + "'") {
            if (squares != tree.degree(ends.first)) ++off_model;
        } else if (squares != 1) {
            ++off_model;
        }
    }
    REQUIRE(off_model == 0);
}
