#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kbd/partition.hpp"

namespace kbd {

enum class MeasureKind {
    ENT, ENTz, H, LC, M, SPL, SPLz, VE, KL, EMCa, EMCaz, Gini, EMCb,
    MPS, MPSprime, BME, RIO, RIOprime, RIOz
};

// Which branch of the q-partition search handles a measure.
enum class SearchFamily { Entropy, Split, Rio, KL, EMCb, MPS, BME };

struct RioParams {
    double c = 0.25;
    double c_low = 0.1;
    double c_high = 0.5;
};

struct MeasureConfig {
    MeasureKind kind = MeasureKind::ENT;
    double z = 1.0;
    RioParams rio;
    double t_m = 0.05;
    double t_card = 0.0;
    double t_ent = 0.05;
};

class MeasureUndefined : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

MeasureConfig parse_measure(const std::string& text);
std::string to_string(const MeasureConfig& cfg);
std::string kind_name(MeasureKind k);

SearchFamily search_family(MeasureKind k);
bool minimized(MeasureKind k);

double answer_probability(const QPartition& part, const std::vector<double>& p, bool answer);

// n = ceil(c * |D|)
int rio_target(double c, std::size_t num_diags);

double eval_measure(const MeasureConfig& cfg, const QPartition& part, const std::vector<double>& p);

enum class Preference { A, B, Tie };
Preference prefers(const MeasureConfig& cfg, const QPartition& a, const QPartition& b, const std::vector<double>& p);

bool is_discrimination_preferred(const QPartition& a, const QPartition& b);

// Maximum of KL or EMCb over the |D|-1 most probable D+ prefixes.
double theoretical_opt_bound(MeasureKind kind, const std::vector<double>& p);

double elimination_rate(const QPartition& part, bool answer);
bool is_favorable(const QPartition& part, bool answer);
MeasureConfig update_cautiousness(const MeasureConfig& cfg, const QPartition& part, bool answer);

}  // namespace kbd
