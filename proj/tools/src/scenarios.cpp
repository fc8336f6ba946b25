#include <sdwave/experiments.hpp>

namespace sdwave::experiments {

namespace {

#if SDWAVE_BUILTIN_SCENARIOS
constexpr std::string_view kBuiltins[] = {
    R"ini(
[scenario]
name = constant-conservation
tag = constant speed
description = Constant speed a = 1.5; total energy of a box datum stays put to t = 100
task = simulate
[profile]
family = constant
value = 1.5
[data]
kind = box
width = 2
u0 = 0.5
u1 = 1
[solver]
horizon = 100
grid = 64
per_decade = 32
tol = 1e-12
[expect]
conservation = 1e-8
)ini",
    R"ini(
[scenario]
name = example1-case-i
tag = Example 1
description = Example 1 speed with p = 2 (bounded Theta); two-sided envelope from the pseudo-differential estimate
task = certify-gec
[profile]
family = example1
p = 2
q = 0
r = 0
m = 1
[certificate]
kind = bounded-theta
modes = 32
[solver]
horizon = 1000
per_decade = 32
)ini",
    R"ini(
[scenario]
name = example1-case-ii
tag = Example 1
description = Example 1 speed with m = 1, q < p and 1/Xi integrable; Gronwall envelope on the energy
task = certify-gec
[profile]
family = example1
p = 0.5
q = 0.25
r = 0
m = 1
[certificate]
kind = integrable-xi
modes = 32
[solver]
horizon = 1000
per_decade = 32
)ini",
    R"ini(
[scenario]
name = example2-case-iii
tag = Example 2
description = Example 2 sparse bumps (m = 2, alpha = beta = kappa = 1); zones, diagonalization chain and N escalation
task = certify-gec
[profile]
family = example2
eta = 3
alpha = 1
beta = 1
kappa = 1
m = 2
[certificate]
kind = zones-theta
modes = 32
[solver]
horizon = 1000
per_decade = 32
[expect]
eigen_residual = 1e-10
)ini",
    R"ini(
[scenario]
name = example37-lambda
tag = Example 3.7
description = Example 1 speed with p = 0, q = 1/2 under Lambda zones; fitted constant C in front of exp(2|xi| Theta(Lambda^-1(N0/|xi|)))
task = certify-lambda
[profile]
family = example1
p = 0
q = 0.5
r = 0
m = 3
[certificate]
modes = 32
[solver]
horizon = 1000
per_decade = 32
)ini",
    R"ini(
[scenario]
name = gevrey36
tag = Example 3.6
description = Example 3.6 data (M0 = 8) with M_j = j! exp(j^2): moments, coefficient decay, Fourier bound and the L/U gate
task = gevrey-gate
[profile]
family = example1
p = 0
q = 0
r = 1.5
m = 2
[data]
kind = gevrey36
m0 = 8
[gevrey]
sequence = exponential
b = 1
sigma = 2
rho = 1
moment_order = 6
[solver]
grid = 256
[expect]
gate = case-i
)ini",
    R"ini(
[scenario]
name = gevrey37
tag = Example 3.7
description = Example 3.7 speed (p = 0, q = 1/2) with M_j = j!^1.5 below the critical exponent 2: L > 0 for all N
task = gevrey-gate
[profile]
family = example1
p = 0
q = 0.5
r = 0
m = 3
[gevrey]
sequence = factorial_power
nu = 1.5
[expect]
gate = case-i
)ini",
    R"ini(
[scenario]
name = gevrey37-critical
tag = Example 3.10
description = Example 3.7 speed with M_j = j!^2 at the critical exponent: L vanishes for large N and the inner ratio grows like N
task = gevrey-gate
[profile]
family = example1
p = 0
q = 0.5
r = 0
m = 3
[gevrey]
sequence = factorial_power
nu = 2
n_grid = 2,4,8,16,32,64,128,256,512,1024
threshold = 10
[expect]
gate = case-ii
)ini",
    R"ini(
[scenario]
name = gevrey37-boundedness
tag = Example 3.7
description = Example 3.7 data on the Example 3.7 speed: U(N0) finite and the total energy below C U(N0) up to t = 1000
task = certify-lambda
[profile]
family = example1
p = 0
q = 0.5
r = 0
m = 3
[data]
kind = gevrey37
rho = 1
kappa = 2
[certificate]
modes = grid
[solver]
horizon = 1000
grid = 64
per_decade = 16
)ini",
    R"ini(
[scenario]
name = hypotheses-example36
tag = Example 3.6
description = Example 1 speed with p = q = 0, r = 3/2: the stabilization and Lambda conditions hold while H4* fails
task = hypotheses
[profile]
family = example1
p = 0
q = 0
r = 1.5
m = 2
[hypotheses]
horizon = 10000
[expect]
hold = H1*,H2*,H5*,H6*
fail = H4*
)ini",
    R"ini(
[scenario]
name = resonance-exploratory
tag = negative result
description = Periodic speed 3 + cos(1 + t): modes near |xi| = 1/6 resonate and the energy grows; no verdict
task = simulate
[profile]
family = example1
p = 0
q = 1
r = 0
m = 1
[data]
kind = delta
u1 = 1
[solver]
horizon = 200
grid = 256
per_decade = 32
)ini",
};
#endif

}  // namespace

const std::vector<CatalogEntry>& builtin_scenarios() {
  static const std::vector<CatalogEntry> catalog = [] {
    std::vector<CatalogEntry> out;
#if SDWAVE_BUILTIN_SCENARIOS
    for (std::string_view text : kBuiltins) {
      const Config c = parse_config(text);
      const Section& s = c.sections.at("scenario");
      out.push_back({s.at("name"), s.at("tag"), s.at("description"), text});
    }
#endif
    return out;
  }();
  return catalog;
}

std::optional<Config> builtin_config(std::string_view name) {
  for (const auto& e : builtin_scenarios()) {
    if (e.name == name) return parse_config(e.config);
  }
  return std::nullopt;
}

}  // namespace sdwave::experiments
