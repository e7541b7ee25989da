#pragma once

#include "ktg/graph_ops.hpp"

#include <fstream>
#include <sstream>

namespace ktg {

// Text formats.
//
// Skeleton files: one record per line (see Skeleton::to_text).
//
// Diagram inline form: whitespace-separated chords `<edge>:<pos>-<edge>:<pos>`,
// or `empty`. Combination lines: `<rational> | <diagram-inline>`.
//
// Graded element files: a `skeleton <name-or-file>` header, optionally
// `maxdeg <D>`, then combination lines.
//
// Series files: `strands <n> maxdeg <D>`, then combination lines.

inline SkeletonPtr skeleton_by_name_or_file(const std::string& token) {
    try {
        return skeleton_by_name(token);
    } catch (const std::invalid_argument&) {
        std::ifstream in(token);
        if (!in) throw std::invalid_argument("no skeleton named '" + token + "' and no such file");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_skeleton(ss.str());
    }
}

inline ChordDiagram parse_diagram_inline(const SkeletonPtr& skel, const std::string& text,
                                         int lineno = 0) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": " + why);
    };
    std::istringstream in(text);
    std::string tok;
    std::vector<Chord> chords;
    while (in >> tok) {
        if (tok == "empty") continue;
        int e1, p1, e2, p2;
        char c1, d1, c2;
        std::istringstream ts(tok);
        if (!(ts >> e1 >> c1 >> p1 >> d1 >> e2 >> c2 >> p2) || c1 != ':' || d1 != '-' || c2 != ':')
            fail("bad chord token '" + tok + "' (want e:p-e:p)");
        chords.push_back({{e1, p1}, {e2, p2}});
    }
    try {
        return ChordDiagram(skel, chords);
    } catch (const std::invalid_argument& err) {
        fail(err.what());
        throw;  // unreachable
    }
}

inline std::string diagram_inline(const ChordDiagram& d) { return d.str(); }

// Parses combination lines `<rational> | <diagram-inline>` until EOF.
inline RatComb parse_lincomb_lines(const SkeletonPtr& skel, std::istream& in, int& lineno) {
    RatComb out(skel);
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto bar = line.find('|');
        if (bar == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": expected '<rational> | <diagram>'");
        std::string coef = line.substr(0, bar);
        std::string diag = line.substr(bar + 1);
        std::istringstream cs(coef);
        std::string ctok;
        if (!(cs >> ctok))
            throw std::invalid_argument("line " + std::to_string(lineno) + ": missing coefficient");
        out.add_term(parse_diagram_inline(skel, diag, lineno), parse_rational(ctok));
    }
    return out;
}

inline std::string lincomb_lines(const RatComb& v) {
    std::ostringstream os;
    for (auto& [d, c] : v.terms()) os << to_string(c) << " | " << diagram_inline(d) << "\n";
    return os.str();
}

inline GradedElement<Rational> parse_graded_element(std::istream& in) {
    std::string word;
    if (!(in >> word) || word != "skeleton")
        throw std::invalid_argument("line 1: expected 'skeleton <name-or-file>'");
    std::string name;
    in >> name;
    SkeletonPtr skel = skeleton_by_name_or_file(name);
    int maxdeg = 4;
    auto pos = in.tellg();
    if (in >> word) {
        if (word == "maxdeg") in >> maxdeg;
        else in.seekg(pos);
    }
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    int lineno = 1;
    RatComb all = parse_lincomb_lines(skel, in, lineno);
    maxdeg = std::max(maxdeg, all.max_degree());
    GradedElement<Rational> out(skel, maxdeg);
    for (int d = 0; d <= maxdeg; ++d) {
        auto part = all.degree_part(d);
        if (!part.is_zero()) out.set_part(d, part);
    }
    return out;
}

inline Series<Rational> parse_series(std::istream& in) {
    std::string word;
    int n, maxdeg;
    if (!(in >> word >> n) || word != "strands")
        throw std::invalid_argument("line 1: expected 'strands <n> maxdeg <D>'");
    if (!(in >> word >> maxdeg) || word != "maxdeg")
        throw std::invalid_argument("line 1: expected 'strands <n> maxdeg <D>'");
    in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    int lineno = 1;
    RatComb all = parse_lincomb_lines(strands_skeleton(n), in, lineno);
    Series<Rational> out(n, maxdeg);
    for (int d = 0; d <= maxdeg; ++d) {
        auto part = all.degree_part(d);
        if (!part.is_zero()) out.set_part(d, part);
    }
    return out;
}

inline std::string series_file(const Series<Rational>& s) {
    std::ostringstream os;
    os << "strands " << s.strands() << " maxdeg " << s.maxdeg() << "\n";
    for (auto& [d, p] : s.parts()) os << lincomb_lines(p);
    return os.str();
}

inline std::string graded_element_file(const GradedElement<Rational>& g,
                                       const std::string& skeleton_name) {
    std::ostringstream os;
    os << "skeleton " << skeleton_name << " maxdeg " << g.maxdeg() << "\n";
    for (auto& [d, p] : g.parts()) os << lincomb_lines(p);
    return os.str();
}

}  // namespace ktg
