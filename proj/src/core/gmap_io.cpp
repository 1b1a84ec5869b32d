#include "gmap_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace mhf {

namespace {

std::string next_line(std::istream& in, int& lineno) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("gmap: unexpected end of file at line " + std::to_string(lineno));
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

long parse_int(const std::string& s, int lineno) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("gmap: bad integer '" + s + "' at line " + std::to_string(lineno));
    return v;
}

double parse_double(const std::string& s, int lineno) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("gmap: bad number '" + s + "' at line " + std::to_string(lineno));
    return v;
}

std::vector<std::string> keyed_line(std::istream& in, int& lineno, const std::string& key,
                                    size_t min_fields) {
    const auto toks = split(next_line(in, lineno));
    if (toks.empty() || toks[0] != key || toks.size() < min_fields + 1)
        throw ParseError("gmap: expected '" + key + " ...' at line " + std::to_string(lineno));
    return toks;
}

} // namespace

GridMap read_gmap(std::istream& in) {
    int lineno = 0;
    {
        const auto toks = split(next_line(in, lineno));
        if (toks.size() != 2 || toks[0] != "gmap" || toks[1] != "1")
            throw ParseError("gmap: missing 'gmap 1' header");
    }
    const int domain_dim =
        static_cast<int>(parse_int(keyed_line(in, lineno, "domain_dim", 1)[1], lineno));
    const int target_dim =
        static_cast<int>(parse_int(keyed_line(in, lineno, "target_dim", 1)[1], lineno));
    if (domain_dim < 2 || domain_dim > 4)
        throw ParseError("gmap: domain_dim out of range");
    if (target_dim < 2 || target_dim > 8)
        throw ParseError("gmap: target_dim out of range");

    GridShape shape;
    shape.dims = domain_dim;
    {
        const auto toks = keyed_line(in, lineno, "shape", domain_dim);
        if (static_cast<int>(toks.size()) != domain_dim + 1)
            throw ParseError("gmap: shape must list one extent per domain axis");
        for (int a = 0; a < domain_dim; ++a) {
            const long n = parse_int(toks[a + 1], lineno);
            if (n < 3 || n > (1 << 20)) throw ParseError("gmap: bad extent");
            shape.extent[a] = static_cast<int>(n);
        }
    }
    {
        const auto toks = keyed_line(in, lineno, "periodic", domain_dim);
        if (static_cast<int>(toks.size()) != domain_dim + 1)
            throw ParseError("gmap: periodic must list one flag per domain axis");
        for (int a = 0; a < domain_dim; ++a) {
            const long b = parse_int(toks[a + 1], lineno);
            if (b != 0 && b != 1) throw ParseError("gmap: periodic flags are 0/1");
            shape.periodic[a] = (b == 1);
        }
    }
    std::shared_ptr<const Triad> triad;
    {
        const auto toks = keyed_line(in, lineno, "triad", 1);
        TriadFamily fam;
        try {
            fam = parse_family(toks[1]);
        } catch (const UnsupportedTriadError& e) {
            throw ParseError(std::string("gmap: ") + e.what());
        }
        try {
            triad = Triad::make_shared(fam, target_dim);
        } catch (const UnsupportedTriadError& e) {
            throw ParseError(std::string("gmap: ") + e.what());
        }
        if (triad->fold() + 1 != domain_dim)
            throw ParseError("gmap: domain_dim must equal triad fold + 1");
    }

    GridMap m(triad, shape);
    const int64_t count = m.nodes();
    for (int64_t node = 0; node < count; ++node) {
        const auto toks = split(next_line(in, lineno));
        if (static_cast<int>(toks.size()) != target_dim)
            throw ParseError("gmap: node line " + std::to_string(lineno) + " needs " +
                             std::to_string(target_dim) + " values");
        double* v = m.node_values(node);
        for (int c = 0; c < target_dim; ++c) v[c] = parse_double(toks[c], lineno);
    }
    return m;
}

GridMap read_gmap_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_gmap(in);
}

void write_gmap(const GridMap& m, std::ostream& out) {
    const int dims = m.domain_dim();
    const int d = m.target_dim();
    out << "gmap 1\n";
    out << "domain_dim " << dims << "\n";
    out << "target_dim " << d << "\n";
    out << "shape";
    for (int a = 0; a < dims; ++a) out << ' ' << m.shape().extent[a];
    out << "\nperiodic";
    for (int a = 0; a < dims; ++a) out << ' ' << (m.shape().periodic[a] ? 1 : 0);
    out << "\ntriad " << family_name(m.triad().family()) << "\n";
    char buf[40];
    for (int64_t node = 0; node < m.nodes(); ++node) {
        const double* v = m.node_values(node);
        for (int c = 0; c < d; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", v[c]);
            if (c) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

void write_gmap_file(const GridMap& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_gmap(m, out);
    out.flush();
    if (!out) throw IoError("error writing '" + path + "'");
}

} // namespace mhf
