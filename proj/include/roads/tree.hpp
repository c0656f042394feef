#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace roads {

// Vertex of the rooted planar 3-regular tree, addressed by its Ulam-Harris
// label: the root is the empty label, its children are 1,2,3, and every
// deeper vertex appends 1 or 2. All tree geometry is label arithmetic.
class Vertex {
public:
    Vertex() = default;
    explicit Vertex(std::vector<std::uint8_t> digits);

    int depth() const { return static_cast<int>(digits_.size()); }
    bool is_root() const { return digits_.empty(); }

    Vertex parent() const;  // throws std::invalid_argument on the root
    Vertex child(int i) const;  // i in [1, 3] at the root, [1, 2] elsewhere
    std::vector<Vertex> children() const;

    // Longest-common-prefix ancestor, truncated to depth d.
    Vertex prefix(int d) const;
    bool is_prefix_of(const Vertex& other) const;

    const std::vector<std::uint8_t>& digits() const { return digits_; }

    bool operator==(const Vertex& other) const = default;
    // Shortlex order, so "minimal label" tie-breaking is well-defined.
    std::strong_ordering operator<=>(const Vertex& other) const;

private:
    std::vector<std::uint8_t> digits_;
};

// An edge is identified by its deeper endpoint (bijection with non-root
// vertices).
struct Edge {
    Vertex deeper;  // depth >= 1

    explicit Edge(Vertex v);
    Vertex shallow() const { return deeper.parent(); }
    bool operator==(const Edge&) const = default;
};

Vertex meet(const Vertex& x, const Vertex& y);
int distance(const Vertex& x, const Vertex& y);
std::vector<Vertex> geodesic(const Vertex& x, const Vertex& y);

// All depth-n vertices in shortlex order; 1 at n=0, else 3*2^(n-1).
std::vector<Vertex> sphere(int n);
// All vertices at depth <= n in shortlex order; 3*2^n - 2 vertices.
std::vector<Vertex> ball(int n);

// Root renders as "@"; other vertices as bare digit strings.
std::string format_vertex(const Vertex& v);
Vertex parse_vertex(const std::string& text);  // throws on malformed labels

// Vertex "1...1" at depth n.
Vertex ones(int n);

}  // namespace roads
