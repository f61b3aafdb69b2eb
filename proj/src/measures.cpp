#include "kbd/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace kbd {

namespace {

constexpr double kTieEps = 1e-12;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

double ent_z(const QPartition& part, const std::vector<double>& p, double z) {
    double pt = answer_probability(part, p, true);
    return xlog2x(pt) + xlog2x(1.0 - pt) + z * mass(part.dzero, p) + 1.0;
}

double rio_prime(const QPartition& part, const std::vector<double>& p, double c, double z) {
    const double nd = static_cast<double>(part.total());
    int n = rio_target(c, part.total());
    if (n > static_cast<int>(part.total() / 2)) n = static_cast<int>(part.total() / 2);
    double mn = static_cast<double>(std::min(part.dplus.size(), part.dminus.size()));
    double dev = mn >= n ? mn - n : nd;
    return ent_z(part, p, z) / 2.0 + dev;
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value for " + what + ": '" + s + "'");
    }
}

}  // namespace

std::string kind_name(MeasureKind k) {
    switch (k) {
        case MeasureKind::ENT: return "ENT";
        case MeasureKind::ENTz: return "ENTz";
        case MeasureKind::H: return "H";
        case MeasureKind::LC: return "LC";
        case MeasureKind::M: return "M";
        case MeasureKind::SPL: return "SPL";
        case MeasureKind::SPLz: return "SPLz";
        case MeasureKind::VE: return "VE";
        case MeasureKind::KL: return "KL";
        case MeasureKind::EMCa: return "EMCa";
        case MeasureKind::EMCaz: return "EMCaz";
        case MeasureKind::Gini: return "Gini";
        case MeasureKind::EMCb: return "EMCb";
        case MeasureKind::MPS: return "MPS";
        case MeasureKind::MPSprime: return "MPSp";
        case MeasureKind::BME: return "BME";
        case MeasureKind::RIO: return "RIO";
        case MeasureKind::RIOprime: return "RIOp";
        case MeasureKind::RIOz: return "RIOz";
    }
    return "?";
}

MeasureConfig parse_measure(const std::string& text) {
    static const std::map<std::string, MeasureKind> names = {
        {"ENT", MeasureKind::ENT}, {"ENTz", MeasureKind::ENTz}, {"H", MeasureKind::H},
        {"LC", MeasureKind::LC}, {"M", MeasureKind::M}, {"SPL", MeasureKind::SPL},
        {"SPLz", MeasureKind::SPLz}, {"VE", MeasureKind::VE}, {"KL", MeasureKind::KL},
        {"EMCa", MeasureKind::EMCa}, {"EMCaz", MeasureKind::EMCaz}, {"Gini", MeasureKind::Gini},
        {"EMCb", MeasureKind::EMCb}, {"MPS", MeasureKind::MPS}, {"MPSp", MeasureKind::MPSprime},
        {"BME", MeasureKind::BME}, {"RIO", MeasureKind::RIO}, {"RIOp", MeasureKind::RIOprime},
        {"RIOz", MeasureKind::RIOz}};
    MeasureConfig cfg;
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    auto it = names.find(head);
    if (it == names.end()) throw std::invalid_argument("unknown measure '" + head + "'");
    cfg.kind = it->second;
    const bool takes_z = cfg.kind == MeasureKind::ENTz || cfg.kind == MeasureKind::SPLz ||
                         cfg.kind == MeasureKind::EMCaz || cfg.kind == MeasureKind::RIOz;
    if (cfg.kind == MeasureKind::Gini) cfg.z = 0.0;
    if (colon == std::string::npos) {
        if (takes_z) throw std::invalid_argument("measure " + head + " requires a parameter z");
        return cfg;
    }
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    bool saw_z = false;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        std::string key = eq == std::string::npos ? "z" : item.substr(0, eq);
        std::string val = eq == std::string::npos ? item : item.substr(eq + 1);
        double v = parse_number(val, key);
        if (key == "z") { cfg.z = v; saw_z = true; }
        else if (key == "c") cfg.rio.c = v;
        else if (key == "cl") cfg.rio.c_low = v;
        else if (key == "ch") cfg.rio.c_high = v;
        else if (key == "t") cfg.t_m = v;
        else if (key == "tcard") cfg.t_card = v;
        else if (key == "tent") cfg.t_ent = v;
        else throw std::invalid_argument("unknown measure parameter '" + key + "'");
    }
    if (takes_z && !saw_z) throw std::invalid_argument("measure " + head + " requires a parameter z");
    if (cfg.z < 0) throw std::invalid_argument("z must be non-negative");
    if (cfg.t_m < 0 || cfg.t_card < 0 || cfg.t_ent < 0) throw std::invalid_argument("thresholds must be non-negative");
    if (cfg.rio.c_low > cfg.rio.c_high || cfg.rio.c < cfg.rio.c_low || cfg.rio.c > cfg.rio.c_high)
        throw std::invalid_argument("cautiousness must satisfy cl <= c <= ch");
    return cfg;
}

std::string to_string(const MeasureConfig& cfg) {
    std::ostringstream out;
    out << kind_name(cfg.kind);
    switch (cfg.kind) {
        case MeasureKind::ENTz:
        case MeasureKind::SPLz:
        case MeasureKind::EMCaz:
            out << ":" << cfg.z;
            break;
        case MeasureKind::RIOz:
            out << ":" << cfg.z << ",c=" << cfg.rio.c << ",cl=" << cfg.rio.c_low << ",ch=" << cfg.rio.c_high;
            break;
        case MeasureKind::RIO:
        case MeasureKind::RIOprime:
            out << ":c=" << cfg.rio.c << ",cl=" << cfg.rio.c_low << ",ch=" << cfg.rio.c_high;
            break;
        default:
            break;
    }
    return out.str();
}

SearchFamily search_family(MeasureKind k) {
    switch (k) {
        case MeasureKind::ENT:
        case MeasureKind::ENTz:
        case MeasureKind::H:
        case MeasureKind::LC:
        case MeasureKind::M:
        case MeasureKind::EMCa:
        case MeasureKind::EMCaz:
        case MeasureKind::Gini:
            return SearchFamily::Entropy;
        case MeasureKind::SPL:
        case MeasureKind::SPLz:
        case MeasureKind::VE:
            return SearchFamily::Split;
        case MeasureKind::RIO:
        case MeasureKind::RIOprime:
        case MeasureKind::RIOz:
            return SearchFamily::Rio;
        case MeasureKind::KL: return SearchFamily::KL;
        case MeasureKind::EMCb: return SearchFamily::EMCb;
        case MeasureKind::MPS:
        case MeasureKind::MPSprime:
            return SearchFamily::MPS;
        case MeasureKind::BME: return SearchFamily::BME;
    }
    return SearchFamily::Entropy;
}

bool minimized(MeasureKind k) {
    switch (k) {
        case MeasureKind::ENT:
        case MeasureKind::ENTz:
        case MeasureKind::LC:
        case MeasureKind::M:
        case MeasureKind::SPL:
        case MeasureKind::SPLz:
        case MeasureKind::RIO:
        case MeasureKind::RIOprime:
        case MeasureKind::RIOz:
            return true;
        default:
            return false;
    }
}

double answer_probability(const QPartition& part, const std::vector<double>& p, bool answer) {
    double pt = mass(part.dplus, p) + 0.5 * mass(part.dzero, p);
    return answer ? pt : 1.0 - pt;
}

int rio_target(double c, std::size_t num_diags) {
    return static_cast<int>(std::ceil(c * static_cast<double>(num_diags) - 1e-9));
}

double eval_measure(const MeasureConfig& cfg, const QPartition& part, const std::vector<double>& p) {
    const double nplus = static_cast<double>(part.dplus.size());
    const double nminus = static_cast<double>(part.dminus.size());
    const double nzero = static_cast<double>(part.dzero.size());
    const double pt = answer_probability(part, p, true);
    const double pf = 1.0 - pt;
    const double pzero = mass(part.dzero, p);

    switch (cfg.kind) {
        case MeasureKind::ENT:
            return ent_z(part, p, 1.0);
        case MeasureKind::ENTz:
            return ent_z(part, p, cfg.z);
        case MeasureKind::H:
            return -(xlog2x(pt) + xlog2x(pf));
        case MeasureKind::LC:
            return std::max(pt, pf);
        case MeasureKind::M:
            return std::fabs(pt - pf);
        case MeasureKind::SPL:
            return std::fabs(nplus - nminus) + nzero;
        case MeasureKind::SPLz:
            return std::fabs(nplus - nminus) + cfg.z * nzero;
        case MeasureKind::VE: {
            double c = nplus + nminus;
            if (c == 0) return 0.0;
            return -(xlog2x(nplus / c) + xlog2x(nminus / c));
        }
        case MeasureKind::KL: {
            if (part.dplus.empty() || part.dminus.empty())
                throw MeasureUndefined("KL is undefined when a committee side is empty");
            double c = nplus + nminus;
            double pc = mass(part.dplus, p) + mass(part.dminus, p);
            return -(nplus / c * std::log2(mass(part.dplus, p) / pc) +
                     nminus / c * std::log2(mass(part.dminus, p) / pc));
        }
        case MeasureKind::EMCa:
            return 2.0 * (pt - pt * pt) - pzero / 2.0;
        case MeasureKind::EMCaz:
        case MeasureKind::Gini:
            return 2.0 * (pt - pt * pt) - cfg.z * pzero / 2.0;
        case MeasureKind::EMCb:
            return pt * nminus + pf * nplus;
        case MeasureKind::MPS:
        case MeasureKind::MPSprime: {
            const std::size_t nd = part.total();
            bool shape = part.dzero.empty() &&
                         ((part.dplus.size() == nd - 1 && part.dminus.size() == 1) ||
                          (part.dplus.size() == 1 && part.dminus.size() == nd - 1));
            if (!shape) return cfg.kind == MeasureKind::MPS ? 0.0 : -nzero;
            return part.dplus.size() <= part.dminus.size() ? mass(part.dplus, p) : mass(part.dminus, p);
        }
        case MeasureKind::BME: {
            double pp = mass(part.dplus, p);
            double pm = mass(part.dminus, p);
            if (pm < pp) return nminus;
            if (pm > pp) return nplus;
            return 0.0;
        }
        case MeasureKind::RIO:
        case MeasureKind::RIOprime:
            return rio_prime(part, p, cfg.rio.c, 1.0);
        case MeasureKind::RIOz:
            return rio_prime(part, p, cfg.rio.c, cfg.z);
    }
    return 0.0;
}

Preference prefers(const MeasureConfig& cfg, const QPartition& a, const QPartition& b, const std::vector<double>& p) {
    double va = eval_measure(cfg, a, p);
    double vb = eval_measure(cfg, b, p);
    if (std::fabs(va - vb) <= kTieEps) return Preference::Tie;
    bool a_better = minimized(cfg.kind) ? va < vb : va > vb;
    return a_better ? Preference::A : Preference::B;
}

bool is_discrimination_preferred(const QPartition& a, const QPartition& b) {
    // Answer t eliminates D-, answer f eliminates D+.
    auto check = [](const DiagSet& a_for_bt, const DiagSet& a_for_bf, const QPartition& b) {
        if (!is_subset(b.dminus, a_for_bt) || !is_subset(b.dplus, a_for_bf)) return false;
        return is_proper_subset(b.dminus, a_for_bt) || is_proper_subset(b.dplus, a_for_bf);
    };
    return check(a.dminus, a.dplus, b) || check(a.dplus, a.dminus, b);
}

double theoretical_opt_bound(MeasureKind kind, const std::vector<double>& p) {
    if (kind != MeasureKind::KL && kind != MeasureKind::EMCb)
        throw std::invalid_argument("optimum bound is defined for KL and EMCb only");
    const std::size_t nd = p.size();
    if (nd < 2) throw std::invalid_argument("need at least two diagnoses");
    std::vector<int> order(nd);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return p[static_cast<std::size_t>(x)] > p[static_cast<std::size_t>(y)];
    });
    MeasureConfig cfg;
    cfg.kind = kind;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < nd; ++k) {
        QPartition part;
        part.dplus = normalized(DiagSet(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)));
        part.dminus = normalized(DiagSet(order.begin() + static_cast<std::ptrdiff_t>(k), order.end()));
        best = std::max(best, eval_measure(cfg, part, p));
    }
    if (kind == MeasureKind::EMCb && nd % 2 == 0) best = std::max(best, static_cast<double>(nd) / 2.0);
    return best;
}

double elimination_rate(const QPartition& part, bool answer) {
    double nd = static_cast<double>(part.total());
    return static_cast<double>(answer ? part.dminus.size() : part.dplus.size()) / nd;
}

bool is_favorable(const QPartition& part, bool answer) {
    std::size_t eliminated = answer ? part.dminus.size() : part.dplus.size();
    return eliminated >= (part.total() + 1) / 2;
}

MeasureConfig update_cautiousness(const MeasureConfig& cfg, const QPartition& part, bool answer) {
    MeasureConfig out = cfg;
    const double nd = static_cast<double>(part.total());
    const double base = (std::floor((nd - 1.0) / 2.0) + 0.5) / nd;
    const double af = base - elimination_rate(part, answer);
    double c = cfg.rio.c + 2.0 * (cfg.rio.c_high - cfg.rio.c_low) * af;
    out.rio.c = std::clamp(c, cfg.rio.c_low, cfg.rio.c_high);
    return out;
}

}  // namespace kbd
