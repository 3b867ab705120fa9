#include "nomlam/nominal.hpp"

#include <algorithm>
#include <sstream>

namespace nomlam {

const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "REFUTED";
        case Status::Undecided: return "UNDECIDED";
        case Status::Skipped: return "SKIPPED";
    }
    return "?";
}

void Report::merge(const Report& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

std::size_t Report::count(Status s) const {
    return static_cast<std::size_t>(std::count_if(
        records_.begin(), records_.end(), [s](const Record& r) { return r.status == s; }));
}

double Report::undecided_fraction() const {
    std::size_t live = records_.size() - count(Status::Skipped);
    return live == 0 ? 0.0 : static_cast<double>(count(Status::Undecided)) / live;
}

std::string sanitize_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = c == ',' ? ';' : ' ';
    return s;
}

void Report::write(std::ostream& os) const {
    for (const Record& r : records_)
        os << r.suite << ',' << r.case_id << ',' << to_string(r.status) << ',' << r.depth << ','
           << sanitize_field(r.detail) << '\n';
}

std::string Report::summary() const {
    std::ostringstream os;
    os << "pass=" << count(Status::Pass) << " refuted=" << count(Status::Fail)
       << " undecided=" << count(Status::Undecided) << " skipped=" << count(Status::Skipped);
    return os.str();
}

Report check_some_any(const std::string& case_id, const AtomSet& support,
                      const std::function<bool(Atom)>& pred, int trials) {
    auto atoms = fresh_atoms(support, static_cast<std::size_t>(trials) + 1);
    std::vector<Atom> order(atoms.begin(), atoms.end());
    bool first = pred(order.front());
    std::string bad;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (pred(order[i]) != first) bad += atom_name(order[i]) + " ";
    Record r{"some-any", case_id, bad.empty() ? Status::Pass : Status::Fail, -1, ""};
    if (bad.empty())
        r.detail = std::string("agree=") + (first ? "true" : "false");
    else
        r.detail = "first=" + atom_name(order.front()) + " disagree=" + bad;
    Report rep;
    rep.add(std::move(r));
    return rep;
}

}  // namespace nomlam
