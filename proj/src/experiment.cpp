#include "roads/experiment.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace roads {

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ROADSIM_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buf, ptr);
}

TableWriter::TableWriter(std::vector<std::string> columns, Format format)
    : columns_(std::move(columns)), format_(format) {}

void TableWriter::add_row(std::vector<std::string> values) {
    if (values.size() != columns_.size())
        throw std::invalid_argument("row width does not match header");
    rows_.push_back(std::move(values));
}

static void append_json_escaped(std::string& out, const std::string& s) {
    out.push_back('"');
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
}

std::string TableWriter::str() const {
    std::string out;
    if (format_ == Format::kCsv) {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i > 0) out.push_back(',');
            out += columns_[i];
        }
        out.push_back('\n');
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i > 0) out.push_back(',');
                out += row[i];
            }
            out.push_back('\n');
        }
    } else {
        for (const auto& row : rows_) {
            out.push_back('{');
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i > 0) out.push_back(',');
                append_json_escaped(out, columns_[i]);
                out.push_back(':');
                // Values are emitted as strings; numeric parsing is up to
                // the consumer, which keeps CSV and JSONL byte-consistent.
                append_json_escaped(out, row[i]);
            }
            out += "}\n";
        }
    }
    return out;
}

void TableWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output path: " + path);
    out << str();
    if (!out) throw std::runtime_error("write failed: " + path);
}

TableWriter::Format TableWriter::parse_format(const std::string& name) {
    if (name == "csv") return Format::kCsv;
    if (name == "jsonl") return Format::kJsonl;
    throw std::invalid_argument("unknown output format: " + name);
}

}  // namespace roads
