#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace recsynth {

/// Piecewise-linear membership function. Triangles are stored as
/// degenerate trapezoids (b == c); vertical edges (a == b or c == d) get
/// degree 1 at the shared point.
struct MembershipFunction {
    double a = 0, b = 0, c = 0, d = 0;

    static MembershipFunction triangle(double a, double b, double c) {
        MembershipFunction mf{a, b, b, c};
        mf.check();
        return mf;
    }
    static MembershipFunction trapezoid(double a, double b, double c, double d) {
        MembershipFunction mf{a, b, c, d};
        mf.check();
        return mf;
    }

    void check() const {
        if (!(a <= b && b <= c && c <= d))
            throw std::invalid_argument("membership function: parameters must be non-decreasing");
    }

    double degree(double x) const {
        if (x < a || x > d) return 0.0;
        if (x >= b && x <= c) return 1.0;
        if (x < b) return b > a ? (x - a) / (b - a) : 1.0;
        return d > c ? (d - x) / (d - c) : 1.0;
    }
};

/// Named fuzzy variable over a closed interval, with an ordered list of
/// labelled terms. `resolution` is the step of the defuzzification grid
/// (only meaningful for output variables).
struct LinguisticVariable {
    std::string name;
    double lo = 0, hi = 1;
    double resolution = 0.01;
    std::vector<std::pair<std::string, MembershipFunction>> terms;

    const MembershipFunction* find_term(std::string_view label) const {
        for (const auto& [l, mf] : terms)
            if (l == label) return &mf;
        return nullptr;
    }

    std::size_t term_index(std::string_view label) const {
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (terms[i].first == label) return i;
        throw std::invalid_argument("variable '" + name + "': no term named '" +
                                    std::string(label) + "'");
    }

    double clamp(double x) const { return std::clamp(x, lo, hi); }

    void validate() const {
        if (!(lo < hi))
            throw std::invalid_argument("variable '" + name + "': empty universe");
        if (terms.empty())
            throw std::invalid_argument("variable '" + name + "': no terms");
        if (!(resolution > 0.0))
            throw std::invalid_argument("variable '" + name + "': resolution must be positive");
        // Coverage: every grid point must activate at least one term.
        const std::size_t steps = grid_steps();
        for (std::size_t g = 0; g <= steps; ++g) {
            double x = grid_point(g);
            bool covered = false;
            for (const auto& [label, mf] : terms)
                if (mf.degree(x) > 0.0) { covered = true; break; }
            if (!covered)
                throw std::invalid_argument("variable '" + name + "': no term covers x = " +
                                            std::to_string(x));
        }
    }

    std::size_t grid_steps() const {
        return static_cast<std::size_t>(std::llround((hi - lo) / resolution));
    }
    double grid_point(std::size_t g) const {
        return lo + static_cast<double>(g) * resolution;
    }
};

/// Conjunctive IF-THEN rule: every antecedent pair must hold (min), the
/// consequent names a term of the output variable.
struct FuzzyRule {
    std::vector<std::pair<std::string, std::string>> antecedent;  // (variable, label)
    std::pair<std::string, std::string> consequent;               // (variable, label)
};

struct RuleBase {
    std::vector<FuzzyRule> rules;
};

struct RuleCoverageReport {
    std::size_t total_combinations = 0;
    std::size_t covered = 0;
    std::vector<std::vector<std::string>> missing;    // label tuple per input variable
    std::vector<std::vector<std::string>> duplicated;

    bool complete() const { return covered == total_combinations && duplicated.empty(); }
};

/// Counts how many rules fire for each combination of input labels. A rule
/// that omits a variable counts toward every label of that variable.
inline RuleCoverageReport validate_rulebase(const RuleBase& rulebase,
                                            const std::vector<LinguisticVariable>& input_variables) {
    RuleCoverageReport report;
    std::size_t total = 1;
    for (const auto& var : input_variables) total *= var.terms.size();
    report.total_combinations = total;

    std::vector<std::size_t> counts(total, 0);
    for (const auto& rule : rulebase.rules) {
        // Per variable, the set of term indices this rule constrains.
        std::vector<std::vector<std::size_t>> allowed(input_variables.size());
        for (std::size_t v = 0; v < input_variables.size(); ++v) {
            bool mentioned = false;
            for (const auto& [var, label] : rule.antecedent) {
                if (var == input_variables[v].name) {
                    allowed[v].push_back(input_variables[v].term_index(label));
                    mentioned = true;
                }
            }
            if (!mentioned)
                for (std::size_t t = 0; t < input_variables[v].terms.size(); ++t)
                    allowed[v].push_back(t);
        }
        std::vector<std::size_t> pick(input_variables.size(), 0);
        auto advance = [&]() -> bool {
            for (std::size_t v = input_variables.size(); v-- > 0;) {
                if (++pick[v] < allowed[v].size()) return true;
                pick[v] = 0;
            }
            return false;
        };
        do {
            std::size_t flat = 0;
            for (std::size_t v = 0; v < input_variables.size(); ++v)
                flat = flat * input_variables[v].terms.size() + allowed[v][pick[v]];
            ++counts[flat];
        } while (advance());
    }

    for (std::size_t flat = 0; flat < total; ++flat) {
        std::vector<std::string> combo(input_variables.size());
        std::size_t rest = flat;
        for (std::size_t v = input_variables.size(); v-- > 0;) {
            std::size_t k = input_variables[v].terms.size();
            combo[v] = input_variables[v].terms[rest % k].first;
            rest /= k;
        }
        if (counts[flat] == 0)
            report.missing.push_back(combo);
        else
            ++report.covered;
        if (counts[flat] > 1) report.duplicated.push_back(combo);
    }
    return report;
}

/// Mamdani inference engine compiled against fixed variables: activation
/// by min over antecedent degrees, consequents clipped at the activation,
/// aggregation by pointwise max on the output grid, defuzzification by the
/// discrete centroid sum(x * mu) / sum(mu).
class MamdaniFis {
public:
    MamdaniFis(std::vector<LinguisticVariable> inputs, LinguisticVariable output, RuleBase rules)
        : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)) {
        for (const auto& var : inputs_) var.validate();
        output_.validate();
        grid_.resize(output_.grid_steps() + 1);
        for (std::size_t g = 0; g < grid_.size(); ++g) grid_[g] = output_.grid_point(g);

        compiled_.reserve(rules_.rules.size());
        for (const auto& rule : rules_.rules) {
            CompiledRule cr;
            cr.term_of_input.assign(inputs_.size(), static_cast<std::size_t>(-1));
            for (const auto& [var, label] : rule.antecedent) {
                bool found = false;
                for (std::size_t v = 0; v < inputs_.size(); ++v) {
                    if (inputs_[v].name == var) {
                        cr.term_of_input[v] = inputs_[v].term_index(label);
                        found = true;
                        break;
                    }
                }
                if (!found)
                    throw std::invalid_argument("rule references unknown input variable '" + var + "'");
            }
            if (rule.consequent.first != output_.name)
                throw std::invalid_argument("rule consequent targets '" + rule.consequent.first +
                                            "', expected output variable '" + output_.name + "'");
            const MembershipFunction* mf = output_.find_term(rule.consequent.second);
            if (!mf)
                throw std::invalid_argument("rule consequent uses unknown term '" +
                                            rule.consequent.second + "'");
            cr.consequent_grid.resize(grid_.size());
            for (std::size_t g = 0; g < grid_.size(); ++g)
                cr.consequent_grid[g] = mf->degree(grid_[g]);
            compiled_.push_back(std::move(cr));
        }
    }

    const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
    const LinguisticVariable& output() const { return output_; }
    const RuleBase& rules() const { return rules_; }

    /// Crisp inference; inputs are clamped to their universes first.
    double infer(std::span<const double> crisp) const {
        if (crisp.size() != inputs_.size())
            throw std::invalid_argument("infer: expected " + std::to_string(inputs_.size()) +
                                        " inputs, got " + std::to_string(crisp.size()));
        // Degrees of every term of every input at the clamped crisp value.
        std::vector<std::vector<double>> degrees(inputs_.size());
        for (std::size_t v = 0; v < inputs_.size(); ++v) {
            double x = inputs_[v].clamp(crisp[v]);
            degrees[v].resize(inputs_[v].terms.size());
            for (std::size_t t = 0; t < inputs_[v].terms.size(); ++t)
                degrees[v][t] = inputs_[v].terms[t].second.degree(x);
        }

        std::vector<double> aggregate(grid_.size(), 0.0);
        bool any = false;
        for (const auto& rule : compiled_) {
            double act = 1.0;
            for (std::size_t v = 0; v < inputs_.size() && act > 0.0; ++v) {
                std::size_t t = rule.term_of_input[v];
                if (t != static_cast<std::size_t>(-1)) act = std::min(act, degrees[v][t]);
            }
            if (act <= 0.0) continue;
            any = true;
            for (std::size_t g = 0; g < grid_.size(); ++g)
                aggregate[g] = std::max(aggregate[g], std::min(act, rule.consequent_grid[g]));
        }
        if (!any) throw std::runtime_error("infer: no rule fired for the given inputs");

        double weighted = 0.0, area = 0.0;
        for (std::size_t g = 0; g < grid_.size(); ++g) {
            weighted += grid_[g] * aggregate[g];
            area += aggregate[g];
        }
        if (area <= 0.0) throw std::runtime_error("infer: aggregated membership has zero area");
        return weighted / area;
    }

private:
    struct CompiledRule {
        std::vector<std::size_t> term_of_input;  // -1 when the rule omits the variable
        std::vector<double> consequent_grid;
    };

    std::vector<LinguisticVariable> inputs_;
    LinguisticVariable output_;
    RuleBase rules_;
    std::vector<double> grid_;
    std::vector<CompiledRule> compiled_;
};

/// One-off convenience wrapper matching the declarative shape:
/// named inputs against a rule base and an output variable.
inline double infer(const RuleBase& rulebase, const std::map<std::string, double>& inputs,
                    const std::vector<LinguisticVariable>& input_variables,
                    const LinguisticVariable& output) {
    MamdaniFis fis(input_variables, output, rulebase);
    std::vector<double> crisp(input_variables.size());
    for (std::size_t v = 0; v < input_variables.size(); ++v) {
        auto it = inputs.find(input_variables[v].name);
        if (it == inputs.end())
            throw std::invalid_argument("infer: missing input '" + input_variables[v].name + "'");
        crisp[v] = it->second;
    }
    return fis.infer(crisp);
}

}  // namespace recsynth
