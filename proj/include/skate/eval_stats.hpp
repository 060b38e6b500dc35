#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace skate {

struct LikertDataset {
    std::string controller_label;
    // responses[participant][question], values in 1..5
    std::vector<std::vector<int>> responses;
    std::vector<std::string> question_labels;

    std::size_t participants() const { return responses.size(); }
    std::size_t questions() const { return question_labels.size(); }
};

struct ItemStats {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, n-1 denominator
};

std::vector<ItemStats> item_stats(const LikertDataset& ds);

struct MeanDiffRow {
    std::string label;
    double mean_a = 0.0;
    double sd_a = 0.0;
    double mean_b = 0.0;
    double sd_b = 0.0;
    double diff = 0.0;  // mean_b - mean_a
};

struct MeanDiffTable {
    std::vector<MeanDiffRow> rows;
    double sum = 0.0;
};

MeanDiffTable mean_diff_table(const LikertDataset& a, const LikertDataset& b);

// Same table built from already-published per-question means, for
// reproducing results whose raw responses are unavailable.
MeanDiffTable mean_diff_from_means(const std::vector<double>& means_a,
                                   const std::vector<double>& means_b);

// Category order: Strongly agree, Weakly agree, Can't say, Weakly
// disagree, Strongly disagree.
struct CategoryCounts {
    std::array<int, 5> counts{};
    int n() const;
};

// Counts responses of one question column into the five categories,
// mapping 5 -> Strongly agree down to 1 -> Strongly disagree.
CategoryCounts category_counts(const LikertDataset& ds, std::size_t question);

double ks_d_statistic(const CategoryCounts& a, const CategoryCounts& b);

// Per-category absolute cumulative-proportion differences.
std::array<double, 5> ks_category_diffs(const CategoryCounts& a,
                                        const CategoryCounts& b);

enum class Alpha { A20, A15, A10, A05, A01 };
constexpr std::array<Alpha, 5> kAlphas = {Alpha::A20, Alpha::A15, Alpha::A10,
                                          Alpha::A05, Alpha::A01};
double alpha_value(Alpha a);

// One-sample critical value of D: tabled for n in 1..20, 25, 30, 35;
// linearly interpolated for untabled n in 21..34; asymptotic c(alpha)/sqrt(n)
// above 35.
double ks_critical(int n, Alpha alpha);
bool ks_critical_is_interpolated(int n);

// Textbook two-sample critical value c(alpha) * sqrt((n1+n2)/(n1*n2)).
double ks_critical_two_sample(int n1, int n2, Alpha alpha);

enum class KsDecision { Reject, FailToReject };

struct KsResult {
    double d_statistic = 0.0;
    int n = 0;
    std::array<double, 5> category_diffs{};
    std::map<Alpha, double> critical_values;       // one-sample table
    std::map<Alpha, KsDecision> decisions;         // paper-method
    std::map<Alpha, double> critical_values_two_sample;
    std::map<Alpha, KsDecision> decisions_two_sample;  // standard-method
    bool interpolated_critical = false;
};

KsDecision ks_decide(double d, int n, Alpha alpha);

// Full paper-procedure result for one pair of category-count vectors.
// n for the critical-value lookup is the per-group sample size (the two
// groups must be equal-sized for the paper-method lookup to make sense;
// the two-sample values use both sizes).
KsResult ks_test(const CategoryCounts& a, const CategoryCounts& b);

// Survey CSV: header `participant,controller,q1..qK`, one row per
// participant per controller. Returns one dataset per controller label
// in order of first appearance.
std::vector<LikertDataset> load_surveys(std::istream& in);
std::vector<LikertDataset> load_surveys_file(const std::string& path);

class SurveyParseError : public std::runtime_error {
public:
    SurveyParseError(std::size_t row, std::size_t column, const std::string& what);
    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

// Human-readable report: aligned mean/SD/diff table or K-S summary with
// both decision methods and the interpolation / prose-conflict flags.
void print_mean_diff_report(const MeanDiffTable& table, std::ostream& out);
void print_ks_report(const KsResult& result, std::ostream& out);
void write_mean_diff_csv(const MeanDiffTable& table, std::ostream& out);

}  // namespace skate
