#ifndef DDLAB_REPORT_HPP
#define DDLAB_REPORT_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace ddlab
{

// One named check in a report. Checks with required == false are informational and never fail a report.
struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
    bool required = true;
};

struct Report {
    std::vector<Check> checks;

    Check &add(std::string name, bool passed, std::string detail = {}, bool required = true)
    {
        checks.push_back({std::move(name), passed, std::move(detail), required});
        return checks.back();
    }

    void append(const Report &other, const std::string &prefix = {})
    {
        for (const auto &c : other.checks) {
            checks.push_back({prefix + c.name, c.passed, c.detail, c.required});
        }
    }

    bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed || !c.required; });
    }

    const Check *find(const std::string &name) const
    {
        for (const auto &c : checks) {
            if (c.name == name) {
                return &c;
            }
        }
        return nullptr;
    }

    std::vector<std::string> failures() const
    {
        std::vector<std::string> out;
        for (const auto &c : checks) {
            if (c.required && !c.passed) {
                out.push_back(c.detail.empty() ? c.name : c.name + ": " + c.detail);
            }
        }
        return out;
    }
};

} // namespace ddlab

#endif
