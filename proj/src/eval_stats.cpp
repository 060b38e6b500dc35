#include "skate/eval_stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace skate {

namespace {

void require_valid(const LikertDataset& ds) {
    if (ds.responses.empty() || ds.question_labels.empty()) {
        throw std::invalid_argument("empty dataset");
    }
    for (const auto& row : ds.responses) {
        if (row.size() != ds.question_labels.size()) {
            throw std::invalid_argument("ragged response matrix");
        }
        for (int v : row) {
            if (v < 1 || v > 5) {
                throw std::invalid_argument("response outside 1..5");
            }
        }
    }
}

// Massey's one-sample table: rows n = 1..20, 25, 30, 35; columns
// alpha = .20, .15, .10, .05, .01.
struct TableRow {
    int n;
    std::array<double, 5> values;
};

constexpr std::array<TableRow, 23> kCriticalTable{{
    {1, {.900, .925, .950, .975, .995}},
    {2, {.684, .726, .776, .842, .929}},
    {3, {.565, .597, .642, .708, .828}},
    {4, {.494, .525, .564, .624, .733}},
    {5, {.446, .474, .510, .565, .669}},
    {6, {.410, .436, .470, .521, .618}},
    {7, {.381, .405, .438, .486, .577}},
    {8, {.358, .381, .411, .457, .543}},
    {9, {.339, .360, .388, .432, .514}},
    {10, {.322, .342, .368, .410, .490}},
    {11, {.307, .326, .352, .391, .468}},
    {12, {.295, .313, .338, .375, .450}},
    {13, {.284, .302, .325, .361, .433}},
    {14, {.274, .292, .314, .349, .418}},
    {15, {.266, .283, .304, .338, .404}},
    {16, {.258, .274, .295, .328, .392}},
    {17, {.250, .266, .286, .318, .381}},
    {18, {.244, .259, .278, .309, .371}},
    {19, {.237, .252, .272, .301, .363}},
    {20, {.231, .246, .264, .294, .356}},
    {25, {.21, .22, .24, .27, .32}},
    {30, {.19, .20, .22, .24, .29}},
    {35, {.18, .19, .21, .23, .27}},
}};

constexpr std::array<double, 5> kAsymptoticCoeff = {1.07, 1.14, 1.22, 1.36,
                                                    1.63};

std::size_t alpha_index(Alpha a) { return static_cast<std::size_t>(a); }

}  // namespace

double alpha_value(Alpha a) {
    switch (a) {
        case Alpha::A20: return 0.20;
        case Alpha::A15: return 0.15;
        case Alpha::A10: return 0.10;
        case Alpha::A05: return 0.05;
        case Alpha::A01: return 0.01;
    }
    throw std::invalid_argument("unknown alpha");
}

std::vector<ItemStats> item_stats(const LikertDataset& ds) {
    require_valid(ds);
    const std::size_t q_count = ds.questions();
    const std::size_t n = ds.participants();
    std::vector<ItemStats> out(q_count);
    for (std::size_t q = 0; q < q_count; ++q) {
        double sum = 0.0;
        for (const auto& row : ds.responses) {
            sum += row[q];
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& row : ds.responses) {
            const double d = row[q] - mean;
            ss += d * d;
        }
        out[q].mean = mean;
        out[q].sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    }
    return out;
}

MeanDiffTable mean_diff_table(const LikertDataset& a, const LikertDataset& b) {
    if (a.question_labels != b.question_labels) {
        throw std::invalid_argument("datasets have different question sets");
    }
    const auto stats_a = item_stats(a);
    const auto stats_b = item_stats(b);
    MeanDiffTable table;
    for (std::size_t q = 0; q < a.questions(); ++q) {
        MeanDiffRow row;
        row.label = a.question_labels[q];
        row.mean_a = stats_a[q].mean;
        row.sd_a = stats_a[q].sd;
        row.mean_b = stats_b[q].mean;
        row.sd_b = stats_b[q].sd;
        row.diff = row.mean_b - row.mean_a;
        table.sum += row.diff;
        table.rows.push_back(std::move(row));
    }
    return table;
}

MeanDiffTable mean_diff_from_means(const std::vector<double>& means_a,
                                   const std::vector<double>& means_b) {
    if (means_a.size() != means_b.size() || means_a.empty()) {
        throw std::invalid_argument("mean lists must be non-empty and equal-sized");
    }
    MeanDiffTable table;
    for (std::size_t q = 0; q < means_a.size(); ++q) {
        MeanDiffRow row;
        row.label = "q" + std::to_string(q + 1);
        row.mean_a = means_a[q];
        row.mean_b = means_b[q];
        row.diff = row.mean_b - row.mean_a;
        table.sum += row.diff;
        table.rows.push_back(std::move(row));
    }
    return table;
}

int CategoryCounts::n() const {
    int total = 0;
    for (int c : counts) total += c;
    return total;
}

CategoryCounts category_counts(const LikertDataset& ds, std::size_t question) {
    require_valid(ds);
    if (question >= ds.questions()) {
        throw std::invalid_argument("question index out of range");
    }
    CategoryCounts out;
    for (const auto& row : ds.responses) {
        // 5 = Strongly agree -> index 0 ... 1 = Strongly disagree -> index 4
        out.counts[static_cast<std::size_t>(5 - row[question])] += 1;
    }
    return out;
}

std::array<double, 5> ks_category_diffs(const CategoryCounts& a,
                                        const CategoryCounts& b) {
    if (a.n() <= 0 || b.n() <= 0) {
        throw std::invalid_argument("category counts must have n > 0");
    }
    std::array<double, 5> diffs{};
    double cum_a = 0.0;
    double cum_b = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        cum_a += a.counts[i];
        cum_b += b.counts[i];
        diffs[i] = std::abs(cum_a / a.n() - cum_b / b.n());
    }
    return diffs;
}

double ks_d_statistic(const CategoryCounts& a, const CategoryCounts& b) {
    const auto diffs = ks_category_diffs(a, b);
    return *std::max_element(diffs.begin(), diffs.end());
}

bool ks_critical_is_interpolated(int n) {
    if (n < 1 || n > 35) {
        return false;
    }
    return std::none_of(kCriticalTable.begin(), kCriticalTable.end(),
                        [n](const TableRow& row) { return row.n == n; });
}

double ks_critical(int n, Alpha alpha) {
    if (n < 1) {
        throw std::invalid_argument("n must be >= 1");
    }
    const std::size_t col = alpha_index(alpha);
    if (n > 35) {
        return kAsymptoticCoeff[col] / std::sqrt(static_cast<double>(n));
    }
    const TableRow* below = nullptr;
    for (const auto& row : kCriticalTable) {
        if (row.n == n) {
            return row.values[col];
        }
        if (row.n < n) {
            below = &row;
        } else {
            // row.n > n: interpolate between the bracketing tabled rows
            const double t = static_cast<double>(n - below->n) /
                             static_cast<double>(row.n - below->n);
            return below->values[col] + t * (row.values[col] - below->values[col]);
        }
    }
    throw std::logic_error("unreachable: n <= 35 not bracketed");
}

double ks_critical_two_sample(int n1, int n2, Alpha alpha) {
    if (n1 < 1 || n2 < 1) {
        throw std::invalid_argument("sample sizes must be >= 1");
    }
    const double c = kAsymptoticCoeff[alpha_index(alpha)];
    return c * std::sqrt(static_cast<double>(n1 + n2) /
                         (static_cast<double>(n1) * static_cast<double>(n2)));
}

KsDecision ks_decide(double d, int n, Alpha alpha) {
    if (d < 0.0 || d > 1.0) {
        throw std::invalid_argument("d must be in [0, 1]");
    }
    // Reject when D is equal to or larger than the table value.
    return d >= ks_critical(n, alpha) ? KsDecision::Reject
                                      : KsDecision::FailToReject;
}

KsResult ks_test(const CategoryCounts& a, const CategoryCounts& b) {
    KsResult result;
    result.category_diffs = ks_category_diffs(a, b);
    result.d_statistic =
        *std::max_element(result.category_diffs.begin(), result.category_diffs.end());
    result.n = a.n();
    result.interpolated_critical = ks_critical_is_interpolated(result.n);
    for (Alpha alpha : kAlphas) {
        result.critical_values[alpha] = ks_critical(result.n, alpha);
        result.decisions[alpha] = ks_decide(result.d_statistic, result.n, alpha);
        const double two = ks_critical_two_sample(a.n(), b.n(), alpha);
        result.critical_values_two_sample[alpha] = two;
        result.decisions_two_sample[alpha] = result.d_statistic >= two
                                                 ? KsDecision::Reject
                                                 : KsDecision::FailToReject;
    }
    return result;
}

SurveyParseError::SurveyParseError(std::size_t row, std::size_t column,
                                   const std::string& what)
    : std::runtime_error("row " + std::to_string(row) + ", column " +
                         std::to_string(column) + ": " + what),
      row_(row),
      column_(column) {}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

std::vector<LikertDataset> load_surveys(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw SurveyParseError(1, 1, "missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto header = split_csv(line);
    if (header.size() < 3 || header[0] != "participant" ||
        header[1] != "controller") {
        throw SurveyParseError(1, 1,
                               "expected header participant,controller,q1..qK");
    }
    std::vector<std::string> questions(header.begin() + 2, header.end());

    std::vector<LikertDataset> datasets;
    auto dataset_for = [&](const std::string& label) -> LikertDataset& {
        for (auto& ds : datasets) {
            if (ds.controller_label == label) {
                return ds;
            }
        }
        datasets.push_back({label, {}, questions});
        return datasets.back();
    };

    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != questions.size() + 2) {
            throw SurveyParseError(row_no, fields.size(),
                                   "wrong number of fields");
        }
        std::vector<int> responses(questions.size());
        for (std::size_t q = 0; q < questions.size(); ++q) {
            const std::string& cell = fields[q + 2];
            int value = 0;
            auto [ptr, ec] =
                std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw SurveyParseError(row_no, q + 3, "non-integer response");
            }
            if (value < 1 || value > 5) {
                throw SurveyParseError(row_no, q + 3,
                                       "response outside 1..5: " + cell);
            }
            responses[q] = value;
        }
        dataset_for(fields[1]).responses.push_back(std::move(responses));
    }

    if (datasets.empty()) {
        throw SurveyParseError(row_no, 1, "no response rows");
    }
    return datasets;
}

std::vector<LikertDataset> load_surveys_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open survey file: " + path);
    }
    return load_surveys(in);
}

void print_mean_diff_report(const MeanDiffTable& table, std::ostream& out) {
    out << std::left << std::setw(10) << "question" << std::right
        << std::setw(8) << "meanA" << std::setw(8) << "sdA" << std::setw(8)
        << "meanB" << std::setw(8) << "sdB" << std::setw(8) << "diff" << "\n";
    out << std::fixed << std::setprecision(2);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        out << std::left << std::setw(10) << ("q" + std::to_string(i + 1))
            << std::right << std::setw(8) << r.mean_a << std::setw(8) << r.sd_a
            << std::setw(8) << r.mean_b << std::setw(8) << r.sd_b
            << std::setw(8) << r.diff << "\n";
    }
    out << std::left << std::setw(10) << "sum" << std::right << std::setw(40)
        << table.sum << "\n";
    out.unsetf(std::ios::fixed);
    out << std::setprecision(6);
}

void write_mean_diff_csv(const MeanDiffTable& table, std::ostream& out) {
    out << "question,meanA,sdA,meanB,sdB,diff\n";
    for (const auto& r : table.rows) {
        out << '"' << r.label << "\"," << r.mean_a << ',' << r.sd_a << ','
            << r.mean_b << ',' << r.sd_b << ',' << r.diff << "\n";
    }
    out << "sum,,,,," << table.sum << "\n";
}

void print_ks_report(const KsResult& result, std::ostream& out) {
    static const char* kCategoryNames[5] = {
        "Strongly agree", "Weakly agree", "Can't say", "Weakly disagree",
        "Strongly disagree"};
    out << std::fixed << std::setprecision(9);
    out << "Kolmogorov-Smirnov test, n = " << result.n << " per group\n";
    for (std::size_t i = 0; i < 5; ++i) {
        out << "  |diff| " << std::left << std::setw(20) << kCategoryNames[i]
            << std::right << result.category_diffs[i] << "\n";
    }
    out << "D = " << result.d_statistic << "\n";
    if (result.interpolated_critical) {
        out << "note: critical values interpolated between tabled rows\n";
    }
    out << std::setprecision(3);
    out << "alpha   critical(one-sample)  paper-method   critical(two-sample)  standard-method\n";
    for (Alpha alpha : kAlphas) {
        const auto decision_text = [](KsDecision d) {
            return d == KsDecision::Reject ? "Reject" : "FailToReject";
        };
        out << std::setw(5) << alpha_value(alpha) << "   " << std::setw(10)
            << result.critical_values.at(alpha) << std::setw(18)
            << decision_text(result.decisions.at(alpha)) << "   " << std::setw(10)
            << result.critical_values_two_sample.at(alpha) << std::setw(18)
            << decision_text(result.decisions_two_sample.at(alpha)) << "\n";
    }
    out << "note: paper-method applies the one-sample critical table to a\n"
           "two-sample comparison; the standard-method column is the textbook\n"
           "two-sample critical value for the same D.\n";
    out.unsetf(std::ios::fixed);
    out << std::setprecision(6);
}

}  // namespace skate
