#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "chemspace/dataset.hpp"
#include "chemspace/fingerprint.hpp"
#include "chemspace/oracle.hpp"
#include "support/test_support.hpp"

namespace chemspace {
namespace {

TEST(Tanimoto, IdenticalFingerprintsAreAtDistanceZero) {
  const auto a = Fingerprint::from_hex("f0a5");
  EXPECT_EQ(tanimoto_distance(a, a), 0.0);
}

TEST(Tanimoto, DisjointSupportsAreAtDistanceOne) {
  EXPECT_EQ(tanimoto_distance(Fingerprint::from_bits("1100"), Fingerprint::from_bits("0011")), 1.0);
}

TEST(Tanimoto, HandCountedExample) {
  // intersection 1, union 3
  const double d = tanimoto_distance(Fingerprint::from_bits("1100"), Fingerprint::from_bits("1010"));
  EXPECT_DOUBLE_EQ(d, 2.0 / 3.0);
}

TEST(Tanimoto, BothEmptyIsDistanceZero) {
  EXPECT_EQ(tanimoto_distance(Fingerprint(128), Fingerprint(128)), 0.0);
}

TEST(Tanimoto, WidthMismatchThrows) {
  EXPECT_THROW(tanimoto_distance(Fingerprint(8), Fingerprint(16)), DimensionError);
}

TEST(Tanimoto, MatchesNaiveCountAcrossWordBoundaries) {
  Rng rng(11);
  for (std::size_t width : {1u, 63u, 64u, 65u, 200u, 1024u}) {
    for (int k = 0; k < 50; ++k) {
      const auto a = testing::random_fingerprint(rng, width, 0.3);
      const auto b = testing::random_fingerprint(rng, width, 0.3);
      EXPECT_DOUBLE_EQ(tanimoto_distance(a, b), testing::naive_tanimoto(a, b));
    }
  }
}

TEST(Tanimoto, IsAMetricOnRandomTriples) {
  Rng rng(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    const double density = 0.05 + 0.5 * rng.uniform();
    const auto a = testing::random_fingerprint(rng, 96, density);
    const auto b = testing::random_fingerprint(rng, 96, density);
    const auto c = testing::random_fingerprint(rng, 96, density);
    const double ab = tanimoto_distance(a, b);
    const double bc = tanimoto_distance(b, c);
    const double ac = tanimoto_distance(a, c);
    ASSERT_EQ(ab, tanimoto_distance(b, a));
    ASSERT_GE(ab, 0.0);
    ASSERT_LE(ab, 1.0);
    ASSERT_EQ(ab == 0.0, a == b);
    ASSERT_LE(ac, ab + bc + 1e-12);
  }
}

TEST(Fingerprint, HexAndBitsAreBothMostSignificantFirst) {
  EXPECT_EQ(Fingerprint::from_hex("c"), Fingerprint::from_bits("1100"));
  const auto fp = Fingerprint::from_hex("8001");
  EXPECT_EQ(fp.width(), 16u);
  EXPECT_TRUE(fp.test(0));
  EXPECT_TRUE(fp.test(15));
  EXPECT_EQ(fp.count(), 2u);
  EXPECT_EQ(fp.to_hex(), "8001");
}

TEST(Fingerprint, HexRoundTripProperty) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto fp = testing::random_fingerprint(rng, 4 * (1 + rng.index(100)), 0.4);
    EXPECT_EQ(Fingerprint::from_hex(fp.to_hex()), fp);
    EXPECT_EQ(Fingerprint::from_bits(fp.to_bits()), fp);
  }
}

TEST(Fingerprint, RejectsMalformedText) {
  EXPECT_THROW(Fingerprint::from_hex("12g4"), ParseError);
  EXPECT_THROW(Fingerprint::from_bits("0120"), ParseError);
  EXPECT_THROW(Fingerprint::from_hex(""), ParseError);
}

TEST(Oracle, IdenticalFingerprintsGiveAllZeroDistances) {
  std::vector<Fingerprint> fps(3, Fingerprint::from_hex("3c"));
  const FingerprintOracle o(fps);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(o(i, j), 0.0);
  }
}

TEST(Oracle, ExplicitMatrixLookup) {
  const auto m = MatrixOracle::validated({{0.0, 0.5}, {0.5, 0.0}});
  EXPECT_EQ(m(0, 1), 0.5);
  EXPECT_EQ(m(1, 0), 0.5);
}

TEST(Oracle, TriangleViolationNamesTheTriple) {
  try {
    MatrixOracle::validated({{0.0, 0.1, 0.9}, {0.1, 0.0, 0.1}, {0.9, 0.1, 0.0}});
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("(0, 1, 2)"), std::string::npos) << e.what();
  }
}

TEST(Oracle, RejectsAsymmetryDiagonalAndRange) {
  EXPECT_THROW(MatrixOracle::validated({{0.0, 0.5}, {0.4, 0.0}}), ValidationError);
  EXPECT_THROW(MatrixOracle::validated({{0.1, 0.5}, {0.5, 0.0}}), ValidationError);
  EXPECT_THROW(MatrixOracle::validated({{0.0, 1.5}, {1.5, 0.0}}), ValidationError);
  EXPECT_THROW(MatrixOracle::validated({{0.0, 0.5}, {0.5}}), ValidationError);
}

TEST(Oracle, TriangleToleranceIsOneInTheNinth) {
  EXPECT_NO_THROW(MatrixOracle::validated({{0.0, 0.1, 0.2 + 5e-10}, {0.1, 0.0, 0.1}, {0.2 + 5e-10, 0.1, 0.0}}));
  EXPECT_THROW(MatrixOracle::validated({{0.0, 0.1, 0.2 + 5e-9}, {0.1, 0.0, 0.1}, {0.2 + 5e-9, 0.1, 0.0}}),
               ValidationError);
}

TEST(Oracle, LookupsArePure) {
  Rng rng(3);
  std::vector<Fingerprint> fps;
  for (int i = 0; i < 20; ++i) fps.push_back(testing::random_fingerprint(rng, 130, 0.2));
  const DistanceOracle o(FingerprintOracle{fps});
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = 0; j < 20; ++j) {
      const double first = o(i, j);
      EXPECT_EQ(first, o(i, j));
      EXPECT_EQ(first, o(j, i));
      EXPECT_EQ(first, tanimoto_distance(fps[i], fps[j]));
    }
  }
}

TEST(Oracle, CsvMatrixParses) {
  std::istringstream in("0,0.25,0.5\n0.25,0,0.25\n0.5,0.25,0\n");
  const auto m = parse_matrix_csv(in);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m(0, 2), 0.5);
  std::istringstream bad("0,x\nx,0\n");
  EXPECT_THROW(parse_matrix_csv(bad), ParseError);
}

TEST(Dataset, LoadsTwoRecords) {
  std::istringstream in("# comment\nm1\tff00\nm2\t00ff\n");
  const auto ds = parse_dataset(in);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].id, "m1");
  EXPECT_EQ(ds.width(), 16u);
  EXPECT_FALSE(ds[0].label.has_value());
}

TEST(Dataset, DuplicateIdIsNamed) {
  std::istringstream in("m1\tff\nm1\t0f\n");
  try {
    parse_dataset(in);
    FAIL() << "expected duplicate-id error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("m1"), std::string::npos);
  }
}

TEST(Dataset, LabelAndFragmentColumns) {
  std::istringstream in("a\tff\tkinase\tc1ccccc1,C=O,c1ccccc1\nb\t0f\t\tN\n");
  const auto ds = parse_dataset(in);
  EXPECT_EQ(ds[0].label, "kinase");
  ASSERT_TRUE(ds[0].fragments);
  EXPECT_EQ(*ds[0].fragments, (std::vector<std::string>{"C=O", "c1ccccc1"}));
  EXPECT_FALSE(ds[1].label.has_value());
  EXPECT_EQ(*ds[1].fragments, (std::vector<std::string>{"N"}));
}

TEST(Dataset, InconsistentWidthAndBadHexAreRejected) {
  std::istringstream widths("a\tff\nb\tfff\n");
  EXPECT_THROW(parse_dataset(widths), ValidationError);
  std::istringstream hex("a\tfz\n");
  EXPECT_THROW(parse_dataset(hex), ParseError);
  std::istringstream cols("a\n");
  EXPECT_THROW(parse_dataset(cols), ParseError);
}

TEST(Dataset, BitstringFilesAreDetected) {
  std::istringstream bits("a\t1100\nb\t1010\n");
  const auto ds = parse_dataset(bits);
  EXPECT_EQ(ds.width(), 4u);
  EXPECT_DOUBLE_EQ(tanimoto_distance(ds[0].fp, ds[1].fp), 2.0 / 3.0);
  std::istringstream forced("a\t1100\nb\t1010\n");
  EXPECT_EQ(parse_dataset(forced, FingerprintFormat::hex).width(), 16u);
}

TEST(Dataset, WriteThenParseKeepsRecords) {
  std::istringstream in("a\tff\tx\tf1,f2\nb\t0f\ny\t\n");
  // third line has an empty fingerprint column
  EXPECT_THROW(parse_dataset(in), ParseError);
  std::istringstream ok("a\tff\tx\tf1,f2\nb\t0f\n");
  const auto ds = parse_dataset(ok);
  std::ostringstream out;
  write_dataset(out, ds);
  std::istringstream again(out.str());
  const auto ds2 = parse_dataset(again);
  ASSERT_EQ(ds2.size(), 2u);
  EXPECT_EQ(ds2[0].fp, ds[0].fp);
  EXPECT_EQ(ds2[0].fragments, ds[0].fragments);
  EXPECT_EQ(ds2[1].label, ds[1].label);
}

TEST(MoleculeSet, RejectsRepeatsAndOutOfRange) {
  EXPECT_THROW(MoleculeSet({0, 1, 0}, 3), ValidationError);
  EXPECT_THROW(MoleculeSet({0, 3}, 3), ValidationError);
  EXPECT_EQ(MoleculeSet({2, 0}, 3).size(), 2u);
}

}  // namespace
}  // namespace chemspace
