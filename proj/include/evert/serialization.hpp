#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "evert/strand.hpp"

namespace evert {

// Text serialization of strands and curve systems.
//
// Format (one record per line, '#' starts a comment):
//   system <nstrands> <xmin> <xmax> <ymin> <ymax>
//   strand <closed|arc> <nsamples>
//   s <param> <x> <y> <tx> <ty>          (fixed decimal, 12 digits)
//
// All floating point values are written with 12 decimal digits, which makes
// serialized output a stable fingerprint for bitwise comparisons.

struct SerializationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline std::string fmt_double(double v) {
    char buf[40];
    if (v == 0.0) v = 0.0;  // normalize -0
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}
}  // namespace detail

inline void write_strand(std::ostream& os, const Strand& strand) {
    os << "strand " << (strand.kind() == StrandKind::kClosed ? "closed" : "arc") << " " << strand.size() << "\n";
    for (const auto& smp : strand.samples()) {
        os << "s " << detail::fmt_double(smp.s) << " " << detail::fmt_double(smp.position.x) << " "
           << detail::fmt_double(smp.position.y) << " " << detail::fmt_double(smp.tangent.x) << " "
           << detail::fmt_double(smp.tangent.y) << "\n";
    }
}

inline void write_system(std::ostream& os, const CurveSystem& system) {
    const Rect& r = system.rectangle();
    os << "system " << system.size() << " " << detail::fmt_double(r.xmin) << " " << detail::fmt_double(r.xmax) << " "
       << detail::fmt_double(r.ymin) << " " << detail::fmt_double(r.ymax) << "\n";
    for (const auto& s : system.strands()) write_strand(os, s);
}

inline std::string to_string(const CurveSystem& system) {
    std::ostringstream ss;
    write_system(ss, system);
    return ss.str();
}

inline std::string to_string(const Strand& strand) {
    std::ostringstream ss;
    write_strand(ss, strand);
    return ss.str();
}

namespace detail {
inline std::string next_record(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        auto p = line.find('#');
        if (p != std::string::npos) line.erase(p);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (!blank) return line;
    }
    return {};
}
}  // namespace detail

inline Strand read_strand(std::istream& is, const std::string& header_line = {}) {
    std::string header = header_line.empty() ? detail::next_record(is) : header_line;
    std::istringstream hs(header);
    std::string tag, kind_s;
    std::size_t n = 0;
    hs >> tag >> kind_s >> n;
    if (tag != "strand" || n < 2) throw SerializationError("malformed strand header: " + header);
    StrandKind kind = kind_s == "closed" ? StrandKind::kClosed : StrandKind::kProperArc;
    std::vector<StrandSample> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::istringstream ls(detail::next_record(is));
        std::string t;
        StrandSample smp;
        ls >> t >> smp.s >> smp.position.x >> smp.position.y >> smp.tangent.x >> smp.tangent.y;
        if (t != "s" || !ls) throw SerializationError("malformed sample record");
        samples.push_back(smp);
    }
    return Strand(kind, std::move(samples));
}

inline CurveSystem read_system(std::istream& is) {
    std::istringstream hs(detail::next_record(is));
    std::string tag;
    std::size_t n = 0;
    Rect r;
    hs >> tag >> n >> r.xmin >> r.xmax >> r.ymin >> r.ymax;
    if (tag != "system" || !hs) throw SerializationError("malformed system header");
    CurveSystem sys(r);
    for (std::size_t i = 0; i < n; ++i) sys.add(read_strand(is));
    return sys;
}

inline void save_system(const std::string& path, const CurveSystem& system) {
    std::ofstream f(path);
    if (!f) throw SerializationError("cannot open for writing: " + path);
    write_system(f, system);
}

inline CurveSystem load_system(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SerializationError("cannot open for reading: " + path);
    return read_system(f);
}

}  // namespace evert
