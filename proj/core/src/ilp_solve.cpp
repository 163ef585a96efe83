#include <algorithm>
#include <chrono>
#include <deque>
#include <unordered_set>

#include "planshield/ilp.hpp"

namespace planshield {

int IlpModel::add_var(std::string name) {
    const int idx = static_cast<int>(vars.size());
    vars.push_back(BinVar{idx, std::move(name)});
    return idx;
}

void IlpModel::add_constraint(std::string name, std::vector<std::pair<long long, int>> terms,
                              Rel rel, long long bound) {
    constraints.push_back(LinearConstraint{std::move(name), std::move(terms), rel, bound});
}

std::vector<std::string> IlpModel::validate() const {
    std::vector<std::string> out;
    const int n = static_cast<int>(vars.size());
    std::unordered_set<std::string> names;
    for (const auto& v : vars)
        if (!names.insert(v.name).second) out.push_back("duplicate variable name '" + v.name + "'");
    for (const auto& c : constraints) {
        std::unordered_set<int> seen;
        for (const auto& [coeff, var] : c.terms) {
            (void)coeff;
            if (var < 0 || var >= n)
                out.push_back("constraint '" + c.name + "': variable index " + std::to_string(var) +
                              " out of range");
            else if (!seen.insert(var).second)
                out.push_back("constraint '" + c.name + "': duplicate variable index " +
                              std::to_string(var));
        }
    }
    for (const auto& [coeff, var] : objective) {
        if (var < 0 || var >= n)
            out.push_back("objective: variable index " + std::to_string(var) + " out of range");
        if (coeff < 0)
            out.push_back("objective: negative coefficient on variable " + std::to_string(var));
    }
    return out;
}

namespace {

constexpr std::uint8_t kUnfixed = 2;

// One constraint row plus running bounds over the current partial assignment:
// fixed_sum sums the fixed terms, pos_slack/neg_slack bound the unfixed ones.
struct Row {
    std::vector<std::pair<long long, int>> terms;
    Rel rel;
    long long bound;
    long long fixed_sum = 0;
    long long pos_slack = 0;
    long long neg_slack = 0;

    long long max_attain() const { return fixed_sum + pos_slack; }
    long long min_attain() const { return fixed_sum + neg_slack; }
};

class Search {
public:
    Search(const IlpModel& model, double time_budget_s) : model_(model) {
        deadline_ = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(std::min(time_budget_s, 1e9)));
        const std::size_t n = model.vars.size();
        value_.assign(n, kUnfixed);
        obj_coeff_.assign(n, 0);
        min_pos_obj_coeff_ = 0;
        for (const auto& [c, v] : model.objective) {
            obj_coeff_[static_cast<std::size_t>(v)] += c;
            if (c > 0 && (min_pos_obj_coeff_ == 0 || c < min_pos_obj_coeff_))
                min_pos_obj_coeff_ = c;
        }
        occurrences_.resize(n);
        rows_.reserve(model.constraints.size());
        for (const auto& c : model.constraints) {
            Row r;
            r.terms = c.terms;
            r.rel = c.rel;
            r.bound = c.bound;
            for (const auto& [coeff, var] : c.terms) {
                if (coeff > 0)
                    r.pos_slack += coeff;
                else
                    r.neg_slack += coeff;
                occurrences_[static_cast<std::size_t>(var)].push_back(
                    {static_cast<int>(rows_.size()), coeff});
            }
            rows_.push_back(std::move(r));
        }
        in_queue_.assign(rows_.size(), 0);
    }

    SolveResult run() {
        t0_ = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < rows_.size(); ++i) enqueue(static_cast<int>(i));
        bool conflict = !propagate();

        while (true) {
            if (!conflict) {
                const int v = next_unfixed();
                if (v >= 0) {
                    decisions_.push_back({v, 0, trail_.size()});
                    ++stats_.nodes;
                    check_clock();
                    fix(v, 0);
                    conflict = !propagate();
                    continue;
                }
                record_incumbent();
                conflict = true;  // equal-value completions are lexicographically later
            }
            bool resumed = false;
            while (!decisions_.empty()) {
                Decision& d = decisions_.back();
                undo_to(d.trail_mark);
                if (d.tried == 0) {
                    d.tried = 1;
                    fix(d.var, 1);
                    conflict = !propagate();
                    resumed = true;
                    break;
                }
                decisions_.pop_back();
            }
            if (!resumed) break;
        }

        stats_.seconds = elapsed();
        SolveResult result;
        result.stats = stats_;
        if (incumbent_) {
            result.status = SolveStatus::Optimal;
            result.assignment = incumbent_->assignment;
            result.objective = incumbent_->objective;
        } else {
            result.status = SolveStatus::Infeasible;
        }
        return result;
    }

private:
    struct Decision {
        int var;
        std::uint8_t tried;
        std::size_t trail_mark;
    };

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

    void check_clock() {
        if ((stats_.nodes & 255u) != 0) return;
        if (std::chrono::steady_clock::now() <= deadline_) return;
        stats_.seconds = elapsed();
        throw IlpTimeoutError("ilp solve: time budget exceeded", incumbent_, stats_);
    }

    void enqueue(int row) {
        if (!in_queue_[static_cast<std::size_t>(row)]) {
            in_queue_[static_cast<std::size_t>(row)] = 1;
            queue_.push_back(row);
        }
    }

    void fix(int var, std::uint8_t val) {
        value_[static_cast<std::size_t>(var)] = val;
        trail_.push_back(var);
        if (val) obj_fixed_ += obj_coeff_[static_cast<std::size_t>(var)];
        for (const auto& [row, coeff] : occurrences_[static_cast<std::size_t>(var)]) {
            Row& r = rows_[static_cast<std::size_t>(row)];
            if (coeff > 0)
                r.pos_slack -= coeff;
            else
                r.neg_slack -= coeff;
            if (val) r.fixed_sum += coeff;
            enqueue(row);
        }
    }

    void unfix(int var) {
        const std::uint8_t val = value_[static_cast<std::size_t>(var)];
        value_[static_cast<std::size_t>(var)] = kUnfixed;
        if (val) obj_fixed_ -= obj_coeff_[static_cast<std::size_t>(var)];
        for (const auto& [row, coeff] : occurrences_[static_cast<std::size_t>(var)]) {
            Row& r = rows_[static_cast<std::size_t>(row)];
            if (coeff > 0)
                r.pos_slack += coeff;
            else
                r.neg_slack += coeff;
            if (val) r.fixed_sum -= coeff;
        }
    }

    // Decisions are only taken at propagation fixpoints, so the queue holds
    // nothing worth keeping from the abandoned subtree.
    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            unfix(trail_.back());
            trail_.pop_back();
        }
        for (int row : queue_) in_queue_[static_cast<std::size_t>(row)] = 0;
        queue_.clear();
    }

    // Interval reasoning per constraint, to a fixed point. Returns false on
    // conflict (including the objective cutoff against the incumbent).
    bool propagate() {
        while (true) {
            while (!queue_.empty()) {
                const int row_idx = queue_.front();
                queue_.pop_front();
                in_queue_[static_cast<std::size_t>(row_idx)] = 0;
                Row& r = rows_[static_cast<std::size_t>(row_idx)];

                if (r.rel == Rel::Ge || r.rel == Rel::Eq) {
                    if (r.max_attain() < r.bound) return false;
                    if (r.min_attain() < r.bound) {
                        for (const auto& [coeff, var] : r.terms) {
                            if (value_[static_cast<std::size_t>(var)] != kUnfixed) continue;
                            if (coeff > 0 && r.max_attain() - coeff < r.bound)
                                fix(var, 1);
                            else if (coeff < 0 && r.max_attain() + coeff < r.bound)
                                fix(var, 0);
                        }
                    }
                }
                if (r.rel == Rel::Le || r.rel == Rel::Eq) {
                    if (r.min_attain() > r.bound) return false;
                    if (r.max_attain() > r.bound) {
                        for (const auto& [coeff, var] : r.terms) {
                            if (value_[static_cast<std::size_t>(var)] != kUnfixed) continue;
                            if (coeff > 0 && r.min_attain() + coeff > r.bound)
                                fix(var, 0);
                            else if (coeff < 0 && r.min_attain() - coeff > r.bound)
                                fix(var, 1);
                        }
                    }
                }
                if (incumbent_ && obj_fixed_ >= incumbent_->objective) return false;
            }
            if (!incumbent_) return true;
            if (obj_fixed_ >= incumbent_->objective) return false;
            // Objective cutoff as one more interval constraint: a variable
            // whose coefficient alone reaches the incumbent must be 0.
            if (min_pos_obj_coeff_ == 0 ||
                obj_fixed_ + min_pos_obj_coeff_ < incumbent_->objective)
                return true;
            bool fixed_any = false;
            for (const auto& [coeff, var] : model_.objective) {
                if (coeff <= 0) continue;
                if (value_[static_cast<std::size_t>(var)] == kUnfixed &&
                    obj_fixed_ + coeff >= incumbent_->objective) {
                    fix(var, 0);
                    fixed_any = true;
                }
            }
            if (!fixed_any) return true;
        }
    }

    int next_unfixed() {
        // Everything below the deepest decision variable is already fixed.
        int start = decisions_.empty() ? 0 : decisions_.back().var + 1;
        for (int v = start; v < static_cast<int>(value_.size()); ++v)
            if (value_[static_cast<std::size_t>(v)] == kUnfixed) return v;
        return -1;
    }

    void record_incumbent() {
        // Guard: re-evaluate every row on the full assignment.
        for (const Row& r : rows_) {
            const long long v = r.fixed_sum;
            if (r.rel == Rel::Le && v > r.bound) return;
            if (r.rel == Rel::Ge && v < r.bound) return;
            if (r.rel == Rel::Eq && v != r.bound) return;
        }
        if (incumbent_ && obj_fixed_ >= incumbent_->objective) return;
        Incumbent inc;
        inc.objective = obj_fixed_;
        inc.assignment.resize(value_.size());
        for (std::size_t i = 0; i < value_.size(); ++i) inc.assignment[i] = value_[i] == 1 ? 1 : 0;
        incumbent_ = std::move(inc);
    }

    const IlpModel& model_;
    std::chrono::steady_clock::time_point deadline_;
    std::chrono::steady_clock::time_point t0_;
    std::vector<Row> rows_;
    std::vector<std::vector<std::pair<int, long long>>> occurrences_;  // var -> (row, coeff)
    std::vector<std::uint8_t> value_;
    std::vector<long long> obj_coeff_;
    long long min_pos_obj_coeff_ = 0;
    std::vector<int> trail_;
    std::deque<int> queue_;
    std::vector<std::uint8_t> in_queue_;
    std::vector<Decision> decisions_;
    long long obj_fixed_ = 0;
    std::optional<Incumbent> incumbent_;
    SolveStats stats_;
};

}  // namespace

SolveResult solve(const IlpModel& model, double time_budget_s) {
    {
        auto problems = model.validate();
        if (!problems.empty()) throw RangeError("ilp solve: invalid model: " + problems.front());
    }
    Search search(model, time_budget_s);
    return search.run();
}

}  // namespace planshield
