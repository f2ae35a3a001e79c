#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "compotest/lts.hpp"
#include "compotest/testcase.hpp"

namespace compotest {

namespace io_detail {

struct Line {
    std::string text;
    int number;
};

inline std::vector<Line> significant_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        size_t b = raw.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        size_t e = raw.find_last_not_of(" \t");
        lines.push_back({raw.substr(b, e - b + 1), number});
    }
    return lines;
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// "SRC -label-> DST"; returns false if the line is not transition-shaped.
inline bool parse_arrow(const std::string& line, std::string& src, std::string& label,
                        std::string& dst) {
    size_t a = line.find(" -");
    if (a == std::string::npos) return false;
    size_t b = line.find("-> ", a + 2);
    if (b == std::string::npos) return false;
    src = line.substr(0, a);
    label = line.substr(a + 2, b - a - 2);
    dst = line.substr(b + 3);
    auto trim = [](std::string& s) {
        size_t x = s.find_first_not_of(" \t");
        size_t y = s.find_last_not_of(" \t");
        s = x == std::string::npos ? std::string{} : s.substr(x, y - x + 1);
    };
    trim(src);
    trim(label);
    trim(dst);
    return !src.empty() && !label.empty() && !dst.empty();
}

} // namespace io_detail

// Line format:
//   name: fig3s            (optional)
//   inputs: b              (space separated; may be empty)
//   outputs: a
//   initial: 1
//   1 -a-> 2               (one transition per line; `tau` for internal)
// States are those mentioned by `initial` and the transitions. '#' starts a
// comment. Reserved tokens delta/theta/theta_s are rejected as labels.
inline Lts parse_lts(const std::string& text, const std::string& fallback_name = {}) {
    LtsBuilder b(fallback_name);
    bool have_inputs = false, have_outputs = false, have_initial = false;
    std::string initial_name;
    struct RawTransition {
        std::string src, label, dst;
        int line;
    };
    std::vector<RawTransition> raw;

    for (const auto& line : io_detail::significant_lines(text)) {
        auto header = [&](const char* key) -> std::optional<std::string> {
            std::string prefix = std::string(key) + ":";
            if (line.text.rfind(prefix, 0) != 0) return std::nullopt;
            std::string rest = line.text.substr(prefix.size());
            size_t x = rest.find_first_not_of(" \t");
            return x == std::string::npos ? std::string{} : rest.substr(x);
        };
        try {
            if (auto v = header("name")) {
                if (have_inputs || have_outputs || have_initial || !raw.empty())
                    throw ParseError("name: must be the first line", line.number, 1);
                b = LtsBuilder(*v);
                continue;
            }
            if (auto v = header("inputs")) {
                have_inputs = true;
                for (const auto& tok : io_detail::split_ws(*v)) b.input(tok);
                continue;
            }
            if (auto v = header("outputs")) {
                have_outputs = true;
                for (const auto& tok : io_detail::split_ws(*v)) b.output(tok);
                continue;
            }
            if (auto v = header("initial")) {
                if (io_detail::split_ws(*v).size() != 1)
                    throw ParseError("initial: expects one state name", line.number, 1);
                have_initial = true;
                initial_name = io_detail::split_ws(*v)[0];
                continue;
            }
            std::string src, label, dst;
            if (io_detail::parse_arrow(line.text, src, label, dst)) {
                raw.push_back({src, label, dst, line.number});
                continue;
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& err) {
            throw ParseError(err.what(), line.number, 1);
        }
        throw ParseError("unrecognized line: '" + line.text + "'", line.number, 1);
    }

    if (!have_inputs) throw ParseError("missing inputs: header", 1, 1);
    if (!have_outputs) throw ParseError("missing outputs: header", 1, 1);
    if (!have_initial) throw ParseError("missing initial: header", 1, 1);

    b.initial(initial_name);
    for (const auto& t : raw) {
        try {
            b.transition(t.src, t.label, t.dst);
        } catch (const Error& err) {
            throw ParseError(err.what(), t.line, 1);
        }
    }
    Lts l = b.build();
    ValidationReport rep = validate(l);
    if (!rep.ok) throw Error("invalid LTS: " + rep.violations.front());
    return l;
}

// Deterministic (sorted) output; parse(serialize(l)) is isomorphic to l.
inline std::string serialize_lts(const Lts& l) {
    std::ostringstream out;
    if (!l.name().empty()) out << "name: " << l.name() << "\n";
    out << "inputs:";
    for (const auto& t : l.inputs()) out << " " << t;
    out << "\noutputs:";
    for (const auto& t : l.outputs()) out << " " << t;
    out << "\ninitial: " << l.state_name(l.initial()) << "\n";
    std::vector<std::tuple<std::string, std::string, std::string>> rows;
    for (const auto& t : l.transitions())
        rows.emplace_back(l.state_name(t.src), t.label.token(), l.state_name(t.dst));
    std::sort(rows.begin(), rows.end());
    for (const auto& [src, label, dst] : rows)
        out << src << " -" << label << "-> " << dst << "\n";
    return out.str();
}

// Test-case document:
//   test: name             (optional)
//   inputs: a theta
//   outputs: b r
//   root: n0               (or PASS for the trivial test)
//   n0 -theta-> PASS
//   n0 -a-> n1
// PASS and FAIL are reserved node names; theta/theta_s are valid edge
// labels here (and only here).
inline TestCase parse_test_case(const std::string& text,
                                const std::string& fallback_name = {}) {
    TestCase t;
    t.name = fallback_name;
    bool have_inputs = false, have_outputs = false, have_root = false;
    std::string root_name;
    struct RawEdge {
        std::string src, label, dst;
        int line;
    };
    std::vector<RawEdge> raw;

    auto parse_label = [](const std::string& tok, int line) {
        if (tok == "theta") return Label::theta();
        if (tok == "theta_s") return Label::theta_s();
        if (tok == "tau" || tok == "delta")
            throw ParseError("'" + tok + "' is not a test edge label", line, 1);
        if (!is_valid_action_token(tok))
            throw ParseError("invalid label token '" + tok + "'", line, 1);
        return Label::action(tok);
    };

    for (const auto& line : io_detail::significant_lines(text)) {
        auto header = [&](const char* key) -> std::optional<std::string> {
            std::string prefix = std::string(key) + ":";
            if (line.text.rfind(prefix, 0) != 0) return std::nullopt;
            std::string rest = line.text.substr(prefix.size());
            size_t x = rest.find_first_not_of(" \t");
            return x == std::string::npos ? std::string{} : rest.substr(x);
        };
        if (auto v = header("test")) {
            t.name = *v;
            continue;
        }
        if (auto v = header("inputs")) {
            have_inputs = true;
            for (const auto& tok : io_detail::split_ws(*v))
                t.inputs.insert(parse_label(tok, line.number));
            continue;
        }
        if (auto v = header("outputs")) {
            have_outputs = true;
            for (const auto& tok : io_detail::split_ws(*v))
                t.outputs.insert(parse_label(tok, line.number));
            continue;
        }
        if (auto v = header("root")) {
            have_root = true;
            root_name = *v;
            continue;
        }
        std::string src, label, dst;
        if (io_detail::parse_arrow(line.text, src, label, dst)) {
            raw.push_back({src, label, dst, line.number});
            continue;
        }
        throw ParseError("unrecognized line: '" + line.text + "'", line.number, 1);
    }
    if (!have_inputs) throw ParseError("missing inputs: header", 1, 1);
    if (!have_outputs) throw ParseError("missing outputs: header", 1, 1);
    if (!have_root) throw ParseError("missing root: header", 1, 1);

    std::map<std::string, int> node_index;
    auto node_of = [&](const std::string& n, int line) -> NodeRef {
        if (n == "PASS") return NodeRef::pass();
        if (n == "FAIL") return NodeRef::fail();
        if (n.empty()) throw ParseError("empty node name", line, 1);
        auto it = node_index.find(n);
        if (it != node_index.end()) return NodeRef::node(it->second);
        int id = static_cast<int>(t.nodes.size());
        node_index.emplace(n, id);
        t.nodes.emplace_back();
        return NodeRef::node(id);
    };

    NodeRef root = node_of(root_name, 1);
    t.root = root;
    for (const auto& e : raw) {
        NodeRef src = node_of(e.src, e.line);
        if (src.is_terminal())
            throw ParseError("terminal '" + e.src + "' cannot have explicit edges",
                             e.line, 1);
        // resolve the target before indexing: node_of may grow t.nodes
        Label lab = parse_label(e.label, e.line);
        NodeRef dst = node_of(e.dst, e.line);
        t.nodes[src.index()].edges.push_back({lab, dst});
    }
    return t;
}

inline std::string serialize_test_case(const TestCase& t) {
    std::ostringstream out;
    if (!t.name.empty()) out << "test: " << t.name << "\n";
    out << "inputs:";
    for (const Label& l : t.inputs) out << " " << l.token();
    out << "\noutputs:";
    for (const Label& l : t.outputs) out << " " << l.token();
    out << "\n";
    auto node_name = [&](NodeRef r) {
        if (r.is_pass()) return std::string("PASS");
        if (r.is_fail()) return std::string("FAIL");
        return "n" + std::to_string(r.index());
    };
    out << "root: " << node_name(t.root) << "\n";
    for (size_t n = 0; n < t.nodes.size(); ++n)
        for (const TestEdge& e : t.nodes[n].edges)
            out << "n" << n << " -" << e.label.token() << "-> " << node_name(e.target)
                << "\n";
    return out.str();
}

// Multi-document suite files: blank-line separated test documents.
inline std::string serialize_suite(const std::vector<TestCase>& suite) {
    std::string out;
    for (size_t i = 0; i < suite.size(); ++i) {
        if (i) out += "\n";
        out += serialize_test_case(suite[i]);
    }
    return out;
}

inline std::vector<TestCase> parse_suite(const std::string& text) {
    std::vector<TestCase> suite;
    std::string chunk;
    int chunk_no = 0;
    auto flush = [&]() {
        if (!io_detail::significant_lines(chunk).empty())
            suite.push_back(parse_test_case(chunk, "test-" + std::to_string(chunk_no++)));
        chunk.clear();
    };
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            flush();
        else
            chunk += line + "\n";
    }
    flush();
    return suite;
}

} // namespace compotest
