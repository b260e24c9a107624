#include "distfobs/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace distfobs {

namespace {

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        const size_t at = line.find(sep, start);
        if (at == std::string::npos) {
            parts.push_back(line.substr(start));
            break;
        }
        parts.push_back(line.substr(start, at - start));
        start = at + 1;
    }
    return parts;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("trace CSV: bad number '" + s + "'");
    return v;
}

long parse_long(const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("trace CSV: bad integer '" + s + "'");
    return v;
}

}  // namespace

std::string trace_to_csv(const SimulationTrace& t) {
    const int r = t.function_count;
    std::string out = "k";
    for (int i = 1; i <= r; ++i) out += ",psi_" + std::to_string(i);
    out += ",node";
    for (int i = 1; i <= r; ++i) out += ",psihat_" + std::to_string(i);
    out += ",err_norm\n";

    for (size_t k = 0; k < t.psi.size(); ++k) {
        for (int node = 1; node <= t.node_count; ++node) {
            out += std::to_string(k);
            for (int i = 0; i < r; ++i) {
                out += ',';
                append_double(out, t.psi[k](i));
            }
            out += ',';
            out += std::to_string(node);
            const Vector& ph = t.psi_hat[k][static_cast<size_t>(node - 1)];
            for (int i = 0; i < r; ++i) {
                out += ',';
                append_double(out, ph(i));
            }
            out += ',';
            append_double(out, t.err_norm[k][static_cast<size_t>(node - 1)]);
            out += '\n';
        }
    }
    return out;
}

void write_trace_csv(const SimulationTrace& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open trace output: " + path);
    const std::string csv = trace_to_csv(t);
    out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    if (!out) throw IoError("failed writing trace: " + path);
}

SimulationTrace parse_trace_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("trace CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, ',');
    // Header fixes r: k, r psi columns, node, r psihat columns, err_norm.
    if (header.size() < 4 || header[0] != "k" || header.back() != "err_norm")
        throw ParseError("trace CSV: unexpected header");
    const int r = static_cast<int>((header.size() - 3) / 2);
    if (static_cast<size_t>(2 * r + 3) != header.size())
        throw ParseError("trace CSV: unexpected header width");

    SimulationTrace t;
    t.function_count = r;
    long expect_k = 0;
    int max_node = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != header.size())
            throw ParseError("trace CSV: wrong field count");
        const long k = parse_long(f[0]);
        const int node = static_cast<int>(parse_long(f[static_cast<size_t>(r + 1)]));
        if (k == static_cast<long>(t.psi.size())) {
            Vector psi(r);
            for (int i = 0; i < r; ++i)
                psi(i) = parse_double(f[static_cast<size_t>(1 + i)]);
            t.psi.push_back(psi);
            t.psi_hat.emplace_back();
            t.err_norm.emplace_back();
            expect_k = k;
        } else if (k != expect_k) {
            throw ParseError("trace CSV: steps out of order");
        }
        if (node != static_cast<int>(t.psi_hat.back().size()) + 1)
            throw ParseError("trace CSV: nodes out of order");
        Vector ph(r);
        for (int i = 0; i < r; ++i)
            ph(i) = parse_double(f[static_cast<size_t>(r + 2 + i)]);
        t.psi_hat.back().push_back(ph);
        t.err_norm.back().push_back(parse_double(f.back()));
        max_node = std::max(max_node, node);
    }
    if (t.psi.empty()) throw ParseError("trace CSV: no data rows");
    t.node_count = max_node;
    for (const auto& nodes : t.psi_hat)
        if (static_cast<int>(nodes.size()) != max_node)
            throw ParseError("trace CSV: ragged node blocks");
    return t;
}

SimulationTrace load_trace_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_trace_csv(buf.str());
}

}  // namespace distfobs
