#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <queue>
#include <stdexcept>

#include "roads/ball_index.hpp"
#include "roads/tree.hpp"

using namespace roads;

TEST_CASE("vertex codec round trip") {
    CHECK(format_vertex(Vertex{}) == "@");
    CHECK(parse_vertex("@") == Vertex{});
    for (const auto& v : ball(5)) CHECK(parse_vertex(format_vertex(v)) == v);

    CHECK_THROWS_AS(parse_vertex(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_vertex("0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vertex("13"), std::invalid_argument);  // 3 only leads
    CHECK_THROWS_AS(parse_vertex("4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vertex("1x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vertex("@1"), std::invalid_argument);
}

TEST_CASE("sphere and ball sizes") {
    CHECK(sphere(0).size() == 1);
    for (int n = 1; n <= 8; ++n)
        CHECK(sphere(n).size() == 3u << (n - 1));
    for (int n = 0; n <= 8; ++n)
        CHECK(ball(n).size() == (3u << n) - 2);
}

TEST_CASE("parent and child structure") {
    const Vertex root;
    CHECK_THROWS_AS(root.parent(), std::invalid_argument);
    CHECK(root.children().size() == 3);
    const Vertex v = parse_vertex("21");
    CHECK(v.children().size() == 2);
    CHECK(v.parent() == parse_vertex("2"));
    CHECK(v.child(1) == parse_vertex("211"));
    CHECK_THROWS_AS(v.child(3), std::invalid_argument);
    CHECK(root.child(3) == parse_vertex("3"));
}

TEST_CASE("shortlex order") {
    CHECK(Vertex{} < parse_vertex("1"));
    CHECK(parse_vertex("3") < parse_vertex("11"));
    CHECK(parse_vertex("11") < parse_vertex("12"));
    const auto b = ball(4);
    for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1] < b[i]);
}

TEST_CASE("distances match a BFS oracle on ball(6)") {
    const auto vertices = ball(6);
    std::map<Vertex, int> index;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        index.emplace(vertices[i], static_cast<int>(i));

    // adjacency from parent pointers only
    std::vector<std::vector<int>> adj(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].is_root()) continue;
        const int p = index.at(vertices[i].parent());
        adj[i].push_back(p);
        adj[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
    }

    for (std::size_t s = 0; s < vertices.size(); ++s) {
        std::vector<int> dist(vertices.size(), -1);
        std::queue<int> queue;
        dist[s] = 0;
        queue.push(static_cast<int>(s));
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop();
            for (int w : adj[static_cast<std::size_t>(u)])
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                    queue.push(w);
                }
        }
        for (std::size_t t = 0; t < vertices.size(); ++t)
            CHECK(distance(vertices[s], vertices[t]) == dist[t]);
    }
}

TEST_CASE("geodesic structure") {
    const auto vertices = ball(4);
    for (std::size_t i = 0; i < vertices.size(); i += 3)
        for (std::size_t j = 0; j < vertices.size(); j += 5) {
            const auto path = geodesic(vertices[i], vertices[j]);
            REQUIRE(path.size() == static_cast<std::size_t>(
                                       distance(vertices[i], vertices[j]) + 1));
            CHECK(path.front() == vertices[i]);
            CHECK(path.back() == vertices[j]);
            for (std::size_t k = 1; k < path.size(); ++k)
                CHECK(distance(path[k - 1], path[k]) == 1);
            // the meet is the shallowest vertex on the path
            const Vertex m = meet(vertices[i], vertices[j]);
            bool found = false;
            for (const auto& v : path) found = found || v == m;
            CHECK(found);
        }
}

TEST_CASE("meet is the deepest common prefix") {
    CHECK(meet(parse_vertex("112"), parse_vertex("121")) == parse_vertex("1"));
    CHECK(meet(parse_vertex("2"), parse_vertex("3")) == Vertex{});
    CHECK(meet(parse_vertex("11"), parse_vertex("112")) == parse_vertex("11"));
    const Vertex v = parse_vertex("3121");
    CHECK(meet(v, v) == v);
    CHECK(v.prefix(2) == parse_vertex("31"));
    CHECK(parse_vertex("31").is_prefix_of(v));
    CHECK_FALSE(parse_vertex("32").is_prefix_of(v));
}

TEST_CASE("ones helper") {
    CHECK(ones(0) == Vertex{});
    CHECK(ones(4) == parse_vertex("1111"));
    CHECK(distance(Vertex{}, ones(7)) == 7);
}

TEST_CASE("flat ball indexing is consistent with labels") {
    for (int d = 0; d <= 6; ++d) {
        const auto level = sphere(d);
        CHECK(level.size() == ball_index::level_size(d));
        for (std::uint32_t pos = 0; pos < level.size(); ++pos) {
            const Vertex& v = level[pos];
            CHECK(ball_index::pos_of(v) == pos);
            CHECK(ball_index::to_vertex(d, pos) == v);
            const std::uint32_t id = ball_index::id_of(d, pos);
            const auto [d2, pos2] = ball_index::locate(id);
            CHECK(d2 == d);
            CHECK(pos2 == pos);
            if (d >= 2)
                CHECK(ball_index::parent_pos(pos) == ball_index::pos_of(v.parent()));
            if (d >= 3)
                CHECK(ball_index::ancestor_pos(d, pos, 1) ==
                      ball_index::pos_of(v.prefix(1)));
        }
    }
    // flat ids agree with shortlex ball order
    const auto b = ball(5);
    for (std::size_t i = 0; i < b.size(); ++i)
        CHECK(ball_index::id_of(b[i].depth(), ball_index::pos_of(b[i])) == i);
}
