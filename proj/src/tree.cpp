#include "roads/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace roads {

static void check_digits(const std::vector<std::uint8_t>& digits) {
    for (std::size_t i = 0; i < digits.size(); ++i) {
        std::uint8_t limit = (i == 0) ? 3 : 2;
        if (digits[i] < 1 || digits[i] > limit)
            throw std::invalid_argument("invalid Ulam-Harris label digit");
    }
}

Vertex::Vertex(std::vector<std::uint8_t> digits) : digits_(std::move(digits)) {
    check_digits(digits_);
}

Vertex Vertex::parent() const {
    if (is_root()) throw std::invalid_argument("root has no parent");
    auto d = digits_;
    d.pop_back();
    return Vertex(std::move(d));
}

Vertex Vertex::child(int i) const {
    const int limit = is_root() ? 3 : 2;
    if (i < 1 || i > limit) throw std::invalid_argument("child index out of range");
    auto d = digits_;
    d.push_back(static_cast<std::uint8_t>(i));
    return Vertex(std::move(d));
}

std::vector<Vertex> Vertex::children() const {
    std::vector<Vertex> out;
    const int limit = is_root() ? 3 : 2;
    out.reserve(limit);
    for (int i = 1; i <= limit; ++i) out.push_back(child(i));
    return out;
}

Vertex Vertex::prefix(int d) const {
    if (d < 0 || d > depth()) throw std::invalid_argument("prefix depth out of range");
    return Vertex(std::vector<std::uint8_t>(digits_.begin(), digits_.begin() + d));
}

bool Vertex::is_prefix_of(const Vertex& other) const {
    if (depth() > other.depth()) return false;
    return std::equal(digits_.begin(), digits_.end(), other.digits_.begin());
}

std::strong_ordering Vertex::operator<=>(const Vertex& other) const {
    if (auto c = digits_.size() <=> other.digits_.size(); c != 0) return c;
    return digits_ <=> other.digits_;
}

Edge::Edge(Vertex v) : deeper(std::move(v)) {
    if (deeper.is_root()) throw std::invalid_argument("edges are indexed by non-root vertices");
}

Vertex meet(const Vertex& x, const Vertex& y) {
    const auto& a = x.digits();
    const auto& b = y.digits();
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    return Vertex(std::vector<std::uint8_t>(a.begin(), a.begin() + k));
}

int distance(const Vertex& x, const Vertex& y) {
    return x.depth() + y.depth() - 2 * meet(x, y).depth();
}

std::vector<Vertex> geodesic(const Vertex& x, const Vertex& y) {
    const Vertex m = meet(x, y);
    std::vector<Vertex> out;
    out.reserve(static_cast<std::size_t>(distance(x, y)) + 1);
    for (int d = x.depth(); d > m.depth(); --d) out.push_back(x.prefix(d));
    out.push_back(m);
    for (int d = m.depth() + 1; d <= y.depth(); ++d) out.push_back(y.prefix(d));
    return out;
}

std::vector<Vertex> sphere(int n) {
    if (n < 0) throw std::invalid_argument("negative sphere radius");
    std::vector<Vertex> level{Vertex{}};
    for (int d = 0; d < n; ++d) {
        std::vector<Vertex> next;
        next.reserve(level.size() * 3);
        for (const auto& v : level)
            for (const auto& c : v.children()) next.push_back(c);
        level = std::move(next);
    }
    return level;
}

std::vector<Vertex> ball(int n) {
    if (n < 0) throw std::invalid_argument("negative ball radius");
    std::vector<Vertex> out;
    for (int d = 0; d <= n; ++d) {
        auto s = sphere(d);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

std::string format_vertex(const Vertex& v) {
    if (v.is_root()) return "@";
    std::string out;
    out.reserve(v.digits().size());
    for (auto d : v.digits()) out.push_back(static_cast<char>('0' + d));
    return out;
}

Vertex parse_vertex(const std::string& text) {
    if (text == "@") return Vertex{};
    if (text.empty()) throw std::invalid_argument("empty vertex label (root is \"@\")");
    std::vector<std::uint8_t> digits;
    digits.reserve(text.size());
    for (char c : text) {
        if (c < '1' || c > '3') throw std::invalid_argument("vertex label digit out of range");
        digits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Vertex(std::move(digits));  // constructor rejects '3' past the first digit
}

Vertex ones(int n) {
    return Vertex(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1));
}

}  // namespace roads
