#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "nomlam/atoms.hpp"

namespace nomlam {

enum class Status { Pass, Fail, Undecided, Skipped };

const char* to_string(Status s);

// One line of a check report: suite,case,verdict,depth,detail
struct Record {
    std::string suite;
    std::string case_id;
    Status status = Status::Pass;
    int depth = -1;
    std::string detail;  // counterexample or note
};

class Report {
public:
    void add(Record r) { records_.push_back(std::move(r)); }
    void merge(const Report& other);

    const std::vector<Record>& records() const { return records_; }
    std::size_t count(Status s) const;
    std::size_t size() const { return records_.size(); }
    // no Fail records
    bool ok() const { return count(Status::Fail) == 0; }
    // fraction of Undecided among non-skipped records
    double undecided_fraction() const;

    void write(std::ostream& os) const;
    std::string summary() const;

private:
    std::vector<Record> records_;
};

// Evaluates pred at one fresh atom and `trials` more, all fresh for support.
// Pass when every evaluation agrees.
Report check_some_any(const std::string& case_id, const AtomSet& support,
                      const std::function<bool(Atom)>& pred, int trials = 3);

// f(pi.x) = pi.f(x) for every sample and permutation.
template <class In, class Out, class F, class ActIn, class ActOut, class Show>
Report check_equivariance(const std::string& case_id, F f, const std::vector<In>& samples,
                          const std::vector<Perm>& perms, ActIn act_in, ActOut act_out,
                          Show show) {
    Report rep;
    int k = 0;
    for (const In& x : samples) {
        for (const Perm& p : perms) {
            Out lhs = f(act_in(p, x));
            Out rhs = act_out(p, f(x));
            Record r{"equivariance", case_id + "#" + std::to_string(k++), Status::Pass, -1, ""};
            if (!(lhs == rhs)) {
                r.status = Status::Fail;
                r.detail = "perm=" + to_string(p) + " input=" + show(x);
            }
            rep.add(std::move(r));
        }
    }
    return rep;
}

// CSV-ish escaping for the detail field (commas and newlines replaced).
std::string sanitize_field(std::string s);

}  // namespace nomlam
