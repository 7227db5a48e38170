#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "chemspace/coverage.hpp"
#include "chemspace/random.hpp"

namespace chemspace {
namespace {

Dataset annotated(const std::vector<std::vector<std::string>>& fragment_sets) {
  Dataset ds;
  for (std::size_t i = 0; i < fragment_sets.size(); ++i) {
    ds.add({"m" + std::to_string(i), Fingerprint(8), std::nullopt, fragment_sets[i]});
  }
  return ds;
}

TEST(Coverage, CountsDistinctFragmentsHit) {
  const auto ds = annotated({{"a", "b"}, {"b", "c"}});
  EXPECT_EQ(coverage(ds, MoleculeSet::all(2), ReferenceSet{}), 3u);
}

TEST(Coverage, EmptySetIsZero) {
  const auto ds = annotated({{"a"}});
  EXPECT_EQ(coverage(ds, MoleculeSet{}, ReferenceSet{}), 0u);
}

TEST(Coverage, MissingAnnotationNamesTheRecord) {
  Dataset ds;
  ds.add({"plain", Fingerprint(8), std::nullopt, std::nullopt});
  try {
    coverage(ds, MoleculeSet::all(1), ReferenceSet{});
    FAIL();
  } catch (const AnnotationError& e) {
    EXPECT_NE(std::string(e.what()).find("plain"), std::string::npos);
  }
}

TEST(Coverage, ExplicitUniverseBoundsTheCount) {
  const auto ds = annotated({{"a", "b", "z"}, {"c", "y"}});
  ReferenceSet ref{ReferenceKind::FG, std::unordered_set<std::string>{"a", "b", "c"}};
  EXPECT_EQ(coverage(ds, MoleculeSet::all(2), ref), 3u);
  std::istringstream in("a\n# comment\n\nb\na\n");
  EXPECT_EQ(parse_universe(in), (std::vector<std::string>{"a", "b"}));
}

TEST(Coverage, SubadditiveOnRandomAnnotatedSets) {
  Rng rng(123);
  const std::vector<std::string> vocab{"f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::vector<std::string>> sets;
    for (int i = 0; i < 10; ++i) {
      std::vector<std::string> frags;
      for (const auto& f : vocab) {
        if (rng.bernoulli(0.2)) frags.push_back(f);
      }
      sets.push_back(frags);
    }
    const auto ds = annotated(sets);
    std::vector<std::size_t> a, b, u;
    for (std::size_t i = 0; i < 10; ++i) {
      const auto w = rng.index(3);
      if (w != 1) a.push_back(i);
      if (w != 0) b.push_back(i);
      if (w != 3) u.push_back(i);
    }
    const auto ca = coverage(ds, MoleculeSet(a, 10), {});
    const auto cb = coverage(ds, MoleculeSet(b, 10), {});
    const auto cu = coverage(ds, MoleculeSet(u, 10), {});
    ASSERT_LE(std::max(ca, cb), cu);
    ASSERT_LE(cu, ca + cb);
    ASSERT_LE(cu, vocab.size());
  }
}

}  // namespace
}  // namespace chemspace
