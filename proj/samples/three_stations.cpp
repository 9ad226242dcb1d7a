// Pairwise and joint dependence of annual maxima at three stations, computed
// directly with the library (the `maxdep estimate` command does the same).

#include <cstdio>

#include "maxdep/maxdep.hpp"

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : MAXDEP_SAMPLE_CSV;
  const auto load = maxdep::parse_csv(path);
  const auto& table = load.table;
  const auto pseudo = maxdep::rank_transform(table);

  std::printf("%zu years, %zu stations\n", table.n(), table.k());
  for (const auto& s : maxdep::enumerate_subsets(table.k(), 2)) {
    std::string name;
    for (auto j : s.members()) name += (name.empty() ? "" : ",") + table.locations()[j].label();
    const double v = maxdep::empirical_variogram(pseudo, s);
    if (s.size() == 2) {
      const double nu = maxdep::empirical_madogram(pseudo, s);
      std::printf("v(%s) = %.3f   madogram = %.4f   extremal coefficient = %.3f\n", name.c_str(), v,
                  nu, maxdep::extremal_coefficient_from_madogram(nu));
    } else {
      const auto ci = maxdep::bootstrap_variogram(table, s, 1000, 0.9, 2024);
      std::printf("v(%s) = %.3f   90%% bootstrap interval [%.3f, %.3f]\n", name.c_str(), v, ci.lower,
                  ci.upper);
    }
  }
  return 0;
}
