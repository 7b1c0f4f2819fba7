#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <sstream>
#include <vector>

#include "cascade/random.hpp"
#include "cascade/tree.hpp"

using cascade::Tree;
using cascade::node_t;

TEST_CASE("default tree is a single root") {
    Tree t;
    REQUIRE(t.size() == 1);
    REQUIRE(t.parent_array() == std::vector<node_t>{0});
    REQUIRE(t.degrees() == std::vector<node_t>{0});
    REQUIRE(t.subtree_sizes() == std::vector<node_t>{1});
}

TEST_CASE("from_parents builds arrival-ordered trees") {
    REQUIRE(Tree::from_parents({}).size() == 1);

    const Tree edge = Tree::from_parents({0});
    REQUIRE(edge.size() == 2);
    REQUIRE(edge.parent(1) == 0);

    const Tree path = Tree::from_parents({0, 1, 2});
    REQUIRE(path.parent_array() == std::vector<node_t>{0, 0, 1, 2});

    const Tree star = Tree::from_parents({0, 0, 0});
    REQUIRE(star.parent(3) == 0);
}

TEST_CASE("from_parents rejects out-of-order or negative parents") {
    REQUIRE_THROWS_AS(Tree::from_parents({1}), std::invalid_argument);
    REQUIRE_THROWS_AS(Tree::from_parents({0, 3}), std::invalid_argument);
    REQUIRE_THROWS_AS(Tree::from_parents({-1}), std::invalid_argument);
    REQUIRE_THROWS_AS(Tree::from_parents({0, 0, 5}), std::invalid_argument);
}

#ifndef NDEBUG
TEST_CASE("from_validated_parent_array still validates in debug builds") {
    REQUIRE_THROWS_AS(Tree::from_validated_parent_array({0, 2, 1}),
                      std::logic_error);
    REQUIRE_THROWS_AS(Tree::from_validated_parent_array({1}), std::logic_error);
    REQUIRE_THROWS_AS(Tree::from_validated_parent_array({}), std::logic_error);
}
#endif

TEST_CASE("degrees of canonical shapes") {
    // star N=3: root has both children
    REQUIRE(Tree::from_parents({0, 0}).degrees() == std::vector<node_t>{2, 1, 1});
    // path N=4
    REQUIRE(Tree::from_parents({0, 1, 2}).degrees() ==
            std::vector<node_t>{1, 2, 2, 1});
}

TEST_CASE("degree sum is 2(N-1) on random trees") {
    cascade::rng::engine eng = cascade::rng::make_engine(5);
    for (int trial = 0; trial < 30; ++trial) {
        const node_t n = 2 + static_cast<node_t>(cascade::rng::uniform_below(eng, 999));
        std::vector<node_t> parents(static_cast<std::size_t>(n - 1));
        for (node_t i = 1; i < n; ++i)
            parents[static_cast<std::size_t>(i - 1)] = static_cast<node_t>(
                cascade::rng::uniform_below(eng, static_cast<std::uint64_t>(i)));
        const Tree t = Tree::from_parents(parents);
        const std::vector<node_t> deg = t.degrees();
        REQUIRE(std::accumulate(deg.begin(), deg.end(), node_t{0}) == 2 * (n - 1));

        const std::vector<node_t> sub = t.subtree_sizes();
        REQUIRE(sub[0] == n);
        for (node_t i = 1; i < n; ++i) REQUIRE(sub[static_cast<std::size_t>(i)] >= 1);
    }
}

TEST_CASE("subtree sizes of canonical shapes") {
    REQUIRE(Tree::from_parents({0, 1, 2}).subtree_sizes() ==
            std::vector<node_t>{4, 3, 2, 1});
    REQUIRE(Tree::from_parents({0, 0, 0}).subtree_sizes() ==
            std::vector<node_t>{4, 1, 1, 1});
}

TEST_CASE("tree serialization round-trips") {
    const Tree t = Tree::from_parents({0, 0, 1, 1, 3});
    std::stringstream buf;
    cascade::write_tree(buf, t);
    const Tree back = cascade::read_tree(buf);
    REQUIRE(back.parent_array() == t.parent_array());

    std::stringstream single;
    cascade::write_tree(single, Tree{});
    REQUIRE(cascade::read_tree(single).size() == 1);
}

TEST_CASE("read_tree rejects malformed input") {
    std::stringstream empty;
    REQUIRE_THROWS_AS(cascade::read_tree(empty), std::runtime_error);

    std::stringstream truncated{"3\n1 0\n"};
    REQUIRE_THROWS_AS(cascade::read_tree(truncated), std::runtime_error);

    std::stringstream wrong_child{"3\n2 0\n1 0\n"};
    REQUIRE_THROWS_AS(cascade::read_tree(wrong_child), std::runtime_error);

    std::stringstream bad_parent{"3\n1 0\n2 5\n"};
    REQUIRE_THROWS_AS(cascade::read_tree(bad_parent), std::invalid_argument);
}
