#pragma once

#include <map>
#include <string>
#include <vector>

#include "compotest/io.hpp"

namespace compotest::fixtures {

// Figure systems transcribed from their drawings. Drawn δ self-loops are
// annotations of computed quiescence and are not part of the transition
// relation, so they are omitted here.

inline const std::map<std::string, std::string>& all() {
    static const std::map<std::string, std::string> m = {
        {"fig3s",
         "name: fig3s\n"
         "inputs: b\n"
         "outputs: a\n"
         "initial: 1\n"
         "1 -a-> 2\n"
         "2 -b-> 1\n"},
        {"fig3e",
         "name: fig3e\n"
         "inputs: a\n"
         "outputs: b\n"
         "initial: A\n"
         "A -a-> B\n"
         "B -tau-> C\n"
         "C -b-> A\n"},
        {"fig5i",
         "name: fig5i\n"
         "inputs: b r\n"
         "outputs: a\n"
         "initial: 1\n"
         "1 -a-> 2\n"
         "1 -b-> 1\n"
         "1 -r-> 1\n"
         "2 -b-> 1\n"
         "2 -r-> 1\n"},
        {"fig5e",
         "name: fig5e\n"
         "inputs: a\n"
         "outputs: b\n"
         "initial: A\n"
         "A -a-> B\n"
         "B -b-> A\n"},
        {"fig7s",
         "name: fig7s\n"
         "inputs: a b r\n"
         "outputs: x\n"
         "initial: 1\n"
         "1 -a-> 2\n"
         "1 -a-> 3\n"
         "1 -b-> 3\n"
         "2 -r-> 1\n"
         "2 -x-> 4\n"
         "3 -x-> 4\n"
         "4 -b-> 1\n"},
        {"fig7e",
         "name: fig7e\n"
         "inputs: x\n"
         "outputs: a b\n"
         "initial: A\n"
         "A -a-> B\n"
         "B -x-> C\n"
         "C -b-> A\n"},
        {"fig7is",
         "name: fig7is\n"
         "inputs: a b r\n"
         "outputs: x\n"
         "initial: 1\n"
         "1 -a-> 2\n"
         "1 -a-> 3\n"
         "1 -b-> 1\n"
         "1 -r-> 1\n"
         "2 -a-> 2\n"
         "2 -b-> 2\n"
         "2 -r-> 5\n"
         "2 -x-> 4\n"
         "3 -a-> 3\n"
         "3 -b-> 3\n"
         "3 -r-> 3\n"
         "3 -x-> 4\n"
         "4 -a-> 4\n"
         "4 -b-> 1\n"
         "4 -r-> 4\n"
         "5 -a-> 5\n"
         "5 -b-> 5\n"
         "5 -r-> 5\n"
         "5 -x-> 5\n"},
        {"fig7ie",
         "name: fig7ie\n"
         "inputs: x\n"
         "outputs: a b\n"
         "initial: A\n"
         "A -a-> B\n"
         "A -x-> A\n"
         "B -x-> C\n"
         "C -b-> A\n"
         "C -x-> C\n"},
        {"fig8s",
         "name: fig8s\n"
         "inputs: c\n"
         "outputs: a b x\n"
         "initial: 1\n"
         "1 -tau-> 2\n"
         "1 -tau-> 4\n"
         "1 -tau-> 6\n"
         "2 -a-> 2\n"
         "2 -c-> 3\n"
         "3 -x-> 3\n"
         "4 -b-> 4\n"
         "4 -c-> 5\n"
         "6 -c-> 7\n"
         "7 -x-> 7\n"},
        {"fig8e",
         "name: fig8e\n"
         "inputs: a b c\n"
         "outputs: y\n"
         "initial: A\n"
         "A -tau-> B\n"
         "A -tau-> D\n"
         "B -a-> B\n"
         "B -c-> C\n"
         "C -y-> C\n"
         "D -b-> D\n"
         "D -c-> E\n"},
        {"fig8is1",
         "name: fig8is1\n"
         "inputs: c\n"
         "outputs: a b x\n"
         "initial: 1\n"
         "1 -c-> 1\n"},
        {"fig8is2",
         "name: fig8is2\n"
         "inputs: c\n"
         "outputs: a b x\n"
         "initial: 1\n"
         "1 -c-> 2\n"
         "2 -x-> 2\n"},
        {"fig8ie1",
         "name: fig8ie1\n"
         "inputs: a b c\n"
         "outputs: y\n"
         "initial: A\n"
         "A -c-> A\n"},
        {"fig8ie2",
         "name: fig8ie2\n"
         "inputs: a b c\n"
         "outputs: y\n"
         "initial: A\n"
         "A -c-> B\n"
         "B -y-> B\n"},
        {"fig9s",
         "name: fig9s\n"
         "inputs: b\n"
         "outputs: a\n"
         "initial: 1\n"
         "1 -a-> 2\n"
         "2 -b-> 1\n"},
        {"fig9is",
         "name: fig9is\n"
         "inputs: b\n"
         "outputs: a\n"
         "initial: 1\n"
         "1 -b-> 1\n"},
        {"fig9e",
         "name: fig9e\n"
         "inputs: a\n"
         "outputs: b\n"
         "initial: A\n"
         "A -b-> B\n"
         "B -a-> A\n"},
        {"fig9ie",
         "name: fig9ie\n"
         "inputs: a\n"
         "outputs: b\n"
         "initial: A\n"
         "A -a-> A\n"},
    };
    return m;
}

inline std::vector<std::string> names() {
    std::vector<std::string> r;
    for (const auto& [name, text] : all()) r.push_back(name);
    return r;
}

inline const std::string& text(const std::string& name) {
    auto it = all().find(name);
    if (it == all().end()) throw Error("unknown fixture '" + name + "'");
    return it->second;
}

inline Lts lts(const std::string& name) { return parse_lts(text(name), name); }

} // namespace compotest::fixtures
