#include "kbd/dpi.hpp"

#include <sstream>

#include "kbd/reasoner.hpp"

namespace kbd {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Formula parse_line_formula(const std::string& text, int line) {
    try {
        return parse_formula(text);
    } catch (const ParseError& e) {
        throw DpiError("line " + std::to_string(line) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DpiError("line " + std::to_string(line) + ": " + e.what());
    }
}

FormulaSet parse_test_case(const std::string& text, int line) {
    FormulaSet tc;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        part = trim(part);
        if (!part.empty()) tc.insert(parse_line_formula(part, line));
    }
    if (tc.empty()) throw DpiError("line " + std::to_string(line) + ": empty test case");
    return tc;
}

bool violates_negative(const FormulaSet& kb, const std::vector<FormulaSet>& N) {
    for (const auto& n : N)
        if (entails(kb, n)) return true;
    return false;
}

}  // namespace

FormulaSet DPI::union_P() const {
    FormulaSet u;
    for (const auto& p : P) u.insert_all(p);
    return u;
}

FormulaSet DPI::axioms(const AxiomSet& s) const {
    FormulaSet out;
    for (int i : s) out.insert(K[static_cast<std::size_t>(i)]);
    return out;
}

DPI parse_dpi(const std::string& text) {
    DPI dpi;
    std::stringstream in(text);
    std::string raw;
    char section = 0;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s == "[K]" || s == "[B]" || s == "[P]" || s == "[N]" || s == "[R]") {
                section = s[1];
                continue;
            }
            throw DpiError("line " + std::to_string(line) + ": unknown section " + s);
        }
        switch (section) {
            case 'K':
                if (!dpi.K.insert(parse_line_formula(s, line)))
                    throw DpiError("line " + std::to_string(line) + ": duplicate axiom in K");
                break;
            case 'B':
                dpi.B.insert(parse_line_formula(s, line));
                break;
            case 'P':
                dpi.P.push_back(parse_test_case(s, line));
                break;
            case 'N':
                dpi.N.push_back(parse_test_case(s, line));
                break;
            case 'R':
                if (s != "consistency")
                    throw DpiError("unsupported requirement: " + s);
                break;
            default:
                throw DpiError("line " + std::to_string(line) + ": formula outside of a section");
        }
    }
    for (const auto& f : dpi.K)
        if (dpi.B.contains(f))
            throw DpiError("K and B are not disjoint: " + f.str());
    if (!is_valid_kb(FormulaSet{}, dpi))
        throw DpiError("B together with the positive test cases is not valid");
    return dpi;
}

std::string render_dpi(const DPI& dpi) {
    std::string out = "[K]\n";
    for (const auto& f : dpi.K) out += f.str() + "\n";
    out += "[B]\n";
    for (const auto& f : dpi.B) out += f.str() + "\n";
    auto cases = [&](const std::vector<FormulaSet>& tcs) {
        for (const auto& tc : tcs) {
            for (std::size_t i = 0; i < tc.size(); ++i) out += (i ? "; " : "") + tc[i].str();
            out += "\n";
        }
    };
    out += "[P]\n";
    cases(dpi.P);
    out += "[N]\n";
    cases(dpi.N);
    out += "[R]\nconsistency\n";
    return out;
}

bool is_valid_kb(const FormulaSet& Kprime, const DPI& dpi) {
    FormulaSet kb = Kprime.united(dpi.B).united(dpi.union_P());
    if (!is_consistent(kb)) return false;
    return !violates_negative(kb, dpi.N);
}

bool is_valid_subset(const AxiomSet& s, const DPI& dpi) { return is_valid_kb(dpi.axioms(s), dpi); }

FormulaSet apply_diagnosis(const DPI& dpi, const AxiomSet& D) {
    FormulaSet out;
    for (std::size_t i = 0; i < dpi.K.size(); ++i)
        if (!contains(D, static_cast<int>(i))) out.insert(dpi.K[i]);
    out.insert_all(dpi.union_P());
    return out;
}

bool is_solution_kb(const FormulaSet& S, const DPI& dpi) {
    FormulaSet kb = S.united(dpi.B);
    if (!is_consistent(kb)) return false;
    for (const auto& p : dpi.P)
        if (!entails(kb, p)) return false;
    return !violates_negative(kb, dpi.N);
}

DPI update_dpi(const DPI& dpi, const FormulaSet& Q, bool answer) {
    if (Q.empty()) throw std::invalid_argument("query must be non-empty");
    DPI out = dpi;
    (answer ? out.P : out.N).push_back(Q);
    return out;
}

}  // namespace kbd
