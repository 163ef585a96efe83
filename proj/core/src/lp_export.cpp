#include <cctype>
#include <sstream>
#include <unordered_set>

#include "planshield/ilp.hpp"

namespace planshield {

namespace {

// LP-format identifiers: [A-Za-z0-9_], must not start with a digit.
std::string sanitize_name(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out = "v_" + out;
    return out;
}

void append_terms(std::ostringstream& os, const std::vector<std::pair<long long, int>>& terms,
                  const std::vector<std::string>& names) {
    bool first = true;
    for (const auto& [coeff, var] : terms) {
        if (coeff == 0) continue;
        const long long mag = coeff < 0 ? -coeff : coeff;
        if (first) {
            if (coeff < 0) os << "- ";
            first = false;
        } else {
            os << (coeff < 0 ? " - " : " + ");
        }
        if (mag != 1) os << mag << ' ';
        os << names[static_cast<std::size_t>(var)];
    }
    if (first) os << '0';
}

}  // namespace

std::string export_lp(const IlpModel& model) {
    std::vector<std::string> names;
    names.reserve(model.vars.size());
    std::unordered_set<std::string> used;
    for (const auto& v : model.vars) {
        std::string name = sanitize_name(v.name);
        std::string candidate = name;
        int suffix = 1;
        while (!used.insert(candidate).second) candidate = name + "_" + std::to_string(suffix++);
        names.push_back(candidate);
    }

    std::ostringstream os;
    os << "Minimize\n obj: ";
    append_terms(os, model.objective, names);
    os << "\nSubject To\n";
    std::unordered_set<std::string> row_names;
    int anon = 0;
    for (const auto& c : model.constraints) {
        std::string rname = sanitize_name(c.name.empty() ? "c" + std::to_string(anon++) : c.name);
        std::string candidate = rname;
        int suffix = 1;
        while (!row_names.insert(candidate).second) candidate = rname + "_" + std::to_string(suffix++);
        os << ' ' << candidate << ": ";
        append_terms(os, c.terms, names);
        switch (c.rel) {
            case Rel::Le: os << " <= "; break;
            case Rel::Ge: os << " >= "; break;
            case Rel::Eq: os << " = "; break;
        }
        os << c.bound << '\n';
    }
    os << "Binary\n";
    for (const auto& n : names) os << ' ' << n << '\n';
    os << "End\n";
    return os.str();
}

}  // namespace planshield
