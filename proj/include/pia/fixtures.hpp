// Bundled job inputs: the parabolic and Budden scalar models and the
// coupled-matrix examples, plus the appended numeric-evaluation script for
// example E.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "pia/errors.hpp"

namespace pia {

inline const std::map<std::string, std::string>& bundled_jobs() {
    static const std::map<std::string, std::string> jobs = {
        {"parabolic", R"(# parabolic model
kind = scalar
R = coef*(x^2 - x1^2)
nmax = 2
parrepls = x -> 2, x1 -> 1, coef -> 1
)"},
        {"budden", R"(# Budden model
kind = scalar
R = coef*x/(x - p)
nmax = 2
parrepls = x -> 2, p -> 1, coef -> 1
)"},
        {"A", R"(# example A
kind = coupled
R11 = x*cos(x)^2 + sin(x)^2
R12 = (x - 1)*cos(x)*sin(x)
R21 = (x - 1)*cos(x)*sin(x)
R22 = x*sin(x)^2 + cos(x)^2
parrepls = x -> 2
branch = p
g = cos(x)
normalize = y
trig_expand = y
positive = x
mmax = 2
anchor = 2
)"},
        {"B", R"(# example B
kind = coupled
R11 = -(x*cos(x)^2 + sin(x)^2)
R12 = (x - 1)*cos(x)*sin(x)
R21 = (x - 1)*cos(x)*sin(x)
R22 = -(x*sin(x)^2 + cos(x)^2)
parrepls = x -> 2
branch = m
g = cos(x)
normalize = y
trig_expand = y
positive = x
mmax = 2
anchor = 2
)"},
        {"C1", R"(# example C.1
kind = coupled
R11 = x*cos(x)^2 + sin(x)^2
R12 = i*(x - 1)*cos(x)*sin(x)
R21 = -i*(x - 1)*cos(x)*sin(x)
R22 = x*sin(x)^2 + cos(x)^2
parrepls = x -> 2
branch = p
g = cos(x)
normalize = y
trig_expand = y
positive = x
mmax = 2
anchor = 2
)"},
        {"C2", R"(# example C.2
kind = coupled
R11 = -(x*cos(x)^2 + sin(x)^2)
R12 = i*(x - 1)*cos(x)*sin(x)
R21 = -i*(x - 1)*cos(x)*sin(x)
R22 = -(x*sin(x)^2 + cos(x)^2)
parrepls = x -> 2
branch = m
g = cos(x)
normalize = y
trig_expand = y
positive = x
mmax = 2
anchor = 2
)"},
        {"C3", R"(# example C.3
kind = coupled
R11 = -(x*cos(x)^2 + sin(x)^2)
R12 = (1 + i)/sqrt(2)*(x - 1)*cos(x)*sin(x)
R21 = (1 - i)/sqrt(2)*(x - 1)*cos(x)*sin(x)
R22 = -(x*sin(x)^2 + cos(x)^2)
parrepls = x -> 2
branch = m
g = cos(x)
normalize = y
trig_expand = y
positive = x
mmax = 2
anchor = 2
)"},
        {"C4", R"(# example C.4
kind = coupled
R11 = -(x*cos(x)^2 + sin(x)^2)
R12 = (cos(fi) + i*sin(fi))*(x - 1)*cos(x)*sin(x)
R21 = (cos(fi) - i*sin(fi))*(x - 1)*cos(x)*sin(x)
R22 = -(x*sin(x)^2 + cos(x)^2)
parrepls = x -> 2
branch = m
g = cos(x)
normalize = y
trig_expand = y
positive = x
mmax = 2
anchor = 2
)"},
        {"D", R"(# example D (non-hermitian matrix)
kind = coupled
R11 = x*cos(x)^2 + sin(x)^2
R12 = 2*i*(x - 1)*cos(x)*sin(x)
R21 = -(1/2)*i*(x - 1)*cos(x)*sin(x)
R22 = x*sin(x)^2 + cos(x)^2
parrepls = x -> 2
branch = p
g = cos(x)
hermitian = n
trig_expand = y
positive = x
mmax = 2
anchor = 2
)"},
        {"E", R"(# example E (non-automatic eigen-split, opaque h0/h1/h2)
kind = coupled
define r(x) = sqrt(h1(x)^2 + h2(x)^2)
R11 = h0(x) - h1(x)
R12 = h2(x)
R21 = h2(x)
R22 = h0(x) + h1(x)
automatic = n
Delta = 4*r(x)^2
sqrtDel = 2*r(x)
signQsq = -1
branch = m
g = h2(x)
normalize = y
mmax = 2
simplify_max_order = 1
anchor = 50
)"},
        {"X", R"(# example X
kind = coupled
R11 = E1 - x^2
R12 = x
R21 = x
R22 = E2 - 4*x^2
parrepls = x -> 3, E1 -> 1, E2 -> 2
branch = m
g = 2*x
normalize = y
positive = x
mmax = 2
anchor = 3
)"},
    };
    return jobs;
}

// appended numeric evaluation for example E
inline const std::string& bundled_append_E() {
    static const std::string script = R"(# appended evaluation for example E
write Y_1
write cp_1
define d0(x) = 1/(4*x^2) + 4/x^4 + 38/x^6 + 748/x^8
define d1(x) = 1/x^2 + 2/x^4 + 19/x^6 + 374/x^8
define h0(x) = -1 - k^2 + d0(x)
define h1(x) = 2*(om + 1/x^2)
define h2(x) = -1 + d1(x)
parrepls = x -> 55, k -> 4/100, om -> 26041/10^7
print Q
print eps0/2
print Y_1
print Y_2
print cp_1
print cp_2
)";
    return script;
}

inline const std::string& bundled_job(const std::string& name) {
    auto it = bundled_jobs().find(name);
    if (it == bundled_jobs().end()) throw JobError("no bundled job named '" + name + "'");
    return it->second;
}

inline std::vector<std::string> bundled_job_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : bundled_jobs()) out.push_back(k);
    return out;
}

}  // namespace pia
