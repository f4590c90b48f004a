#include <sstream>

#include "doctest.h"
#include "impactfield/csv.hpp"
#include "impactfield/errors.hpp"
#include "impactfield/harness.hpp"
#include "scratch_dir.hpp"

using namespace impactfield;
namespace fs = std::filesystem;

namespace {

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::size_t entries(const fs::path& dir) {
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

}  // namespace

TEST_CASE("RunConfig validation") {
  ScratchDir tmp;
  RunConfig c;
  c.input = tmp / "in.txt";
  c.out_dir = tmp / "out";
  CHECK_NOTHROW(c.validate());
  CHECK(fs::is_directory(tmp / "out"));
  CHECK(entries(tmp / "out") == 0);

  auto bad = c;
  bad.gammas = {1.5};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.gammas = {0.0};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.gammas = {};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  bad.orders = {0};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  bad.directed = false;
  bad.treatments = {Treatment::kDirected};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  bad.generator = GeneratorSpec{};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  bad.fit_d_min = 4;
  bad.fit_d_max = 3;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  bad.dense_threshold = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  spit(tmp / "file", "x");
  bad.out_dir = tmp / "file";
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("OutputBatch is all or nothing") {
  ScratchDir tmp;
  {
    OutputBatch batch;
    batch.write(tmp / "a.csv", "one\n");
    batch.open(tmp / "b.csv") << "two\n";
    CHECK_FALSE(fs::exists(tmp / "a.csv"));
  }
  CHECK(entries(tmp.path()) == 0);
  {
    OutputBatch batch;
    batch.write(tmp / "a.csv", "one\n");
    batch.open(tmp / "b.csv") << "two\n";
    batch.commit();
  }
  CHECK(slurp(tmp / "a.csv") == "one\n");
  CHECK(slurp(tmp / "b.csv") == "two\n");
  CHECK(entries(tmp.path()) == 2);
}

TEST_CASE("analyze the directed 2-cycle") {
  ScratchDir tmp;
  spit(tmp / "two.txt", "a b\nb a\n");
  RunConfig c;
  c.input = tmp / "two.txt";
  c.directed = true;
  c.treatments = {Treatment::kDirected};
  c.gammas = {0.5};
  c.include_exact = true;
  c.out_dir = tmp / "out";
  std::ostringstream out, err;
  REQUIRE(cmd_analyze(c, out, err) == 0);

  const auto dyads = parse_dyads_csv(slurp(tmp / "out" / dyad_file_name(Treatment::kDirected, 0.5)));
  REQUIRE(dyads.size() == 2);
  for (const auto& d : dyads) {
    CHECK(d.dist == 1u);
    CHECK(std::abs(d.exact - 2.0 / 3.0) <= 1e-12);
    REQUIRE(d.approx.size() == 2);
    CHECK(std::abs(d.approx[0] - 0.5) <= 1e-12);
    CHECK(std::abs(d.approx[1] - 2.0 / 3.0) <= 1e-12);
  }
  CHECK(slurp(tmp / "out" / "dyads_directed_0.5.csv").rfind("src,dst,dist,exact,approx1,approx2\n", 0) == 0);

  const auto curves = parse_curves_csv(slurp(tmp / "out" / "curves.csv"));
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].network == "two");
  CHECK(curves[0].point.n_pairs == 2);
  CHECK(std::abs(curves[0].point.mean_impact - 2.0 / 3.0) <= 1e-12);
  // Two dyads are too few for a fit or a correlation; the rows are suppressed, not failed.
  CHECK(parse_fits_csv(slurp(tmp / "out" / "fits.csv")).empty());
  CHECK(parse_correlations_csv(slurp(tmp / "out" / "correlations.csv")).empty());
  CHECK(err.str().find("suppressed") != std::string::npos);
}

TEST_CASE("analyze failures leave no outputs") {
  ScratchDir tmp;
  spit(tmp / "empty.txt", "# only a comment\n");
  spit(tmp / "bad.txt", "a b\nc\n");
  spit(tmp / "ok.txt", "a b\nb c\nc a\n");
  RunConfig c;
  c.out_dir = tmp / "out";
  std::ostringstream out, err;

  c.input = tmp / "empty.txt";
  CHECK(cmd_analyze(c, out, err) == 3);
  CHECK(err.str().find("normalize") != std::string::npos);
  c.input = tmp / "bad.txt";
  CHECK(cmd_analyze(c, out, err) == 2);
  CHECK(err.str().find("line 2") != std::string::npos);
  c.input = tmp / "missing.txt";
  CHECK(cmd_analyze(c, out, err) == 1);
  c.input = tmp / "ok.txt";
  c.gammas = {0.5, 1.5};
  CHECK(cmd_analyze(c, out, err) == 1);
  CHECK(entries(tmp / "out") == 0);
}

TEST_CASE("analyze a generated graph and round-trip its rows") {
  ScratchDir tmp;
  RunConfig c;
  c.generator = GeneratorSpec{GeneratorKind::kErdosRenyi, 60, 0.08, 1, true, 5};
  c.out_dir = tmp / "out";
  c.network_id = "net,with \"quotes\"";
  std::ostringstream out, err;
  REQUIRE(cmd_analyze(c, out, err) == 0);

  const auto curves_text = slurp(tmp / "out" / "curves.csv");
  const auto fits_text = slurp(tmp / "out" / "fits.csv");
  const auto corr_text = slurp(tmp / "out" / "correlations.csv");
  const auto curves = parse_curves_csv(curves_text);
  const auto fits = parse_fits_csv(fits_text);
  const auto corr = parse_correlations_csv(corr_text);
  CHECK(curves.size() + 1 == lines(curves_text));
  CHECK(fits.size() == 10);
  CHECK(corr.size() == 20);
  CHECK(corr[0].network == c.network_id);
  CHECK(corr[0].treatment == Treatment::kDirected);
  CHECK(corr.back().treatment == Treatment::kSymmetrized);
  CHECK(corr.back().gamma == 0.96875);
  CHECK(corr.back().order == 2);

  // Rendering the parsed rows again reproduces the file.
  std::vector<StudyCell> cells;
  for (const auto& f : fits) {
    StudyCell cell;
    cell.network = f.network;
    cell.treatment = f.treatment;
    cell.gamma = f.gamma;
    cell.fit = ExponentialFit{f.slope, f.intercept, f.r_squared, f.d_min, f.d_max, 0};
    cells.push_back(cell);
  }
  CHECK(fits_csv(cells) == fits_text);

  // The human summary uses four significant digits.
  CHECK(out.str().find("gamma=0.9688") != std::string::npos);
}

TEST_CASE("CSV parsers reject malformed rows") {
  CHECK_THROWS_AS(parse_curves_csv("network,treatment\n"), ParseError);
  CHECK_THROWS_AS(parse_curves_csv(std::string(kCurvesHeader) + "\nx,directed,0.5,1,0.2\n"), ParseError);
  CHECK_THROWS_AS(parse_curves_csv(std::string(kCurvesHeader) + "\nx,sideways,0.5,1,0.2,3\n"), ParseError);
  CHECK_THROWS_AS(parse_correlations_csv(std::string(kCorrelationsHeader) + "\nx,directed,0.5,1,abc,3\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_manifest_csv(std::string(kManifestHeader) + "\nx,3,2,1.5,2,maybe,\n"), ParseError);
  CHECK_THROWS_AS(parse_dyads_csv("src,dst,dist\n"), ParseError);
  CHECK(parse_curves_csv(std::string(kCurvesHeader) + "\r\n\"a,b\",directed,0.5,1,0.25,3\r\n")[0].network == "a,b");
}

TEST_CASE("manifest statistics") {
  const Graph path = parse_edge_list("a b\nb c\nc d\nx y\n", false);
  auto row = describe_network("p", path);
  CHECK(row.n == 6);
  CHECK(row.edges == 4);
  CHECK(row.mean_degree == doctest::Approx(8.0 / 6.0));
  CHECK(row.diameter == 3);

  const Graph arcs = parse_edge_list("a b\nb c\n", true);
  row = describe_network("d", arcs);
  CHECK(row.mean_degree == doctest::Approx(2.0 / 3.0));
  CHECK(row.diameter == 2);

  const auto er = generate_er(200, 0.025, false, 7);
  row = describe_network("er", er);
  // 2 E[edges] / n = 199 * 0.025 ~ 4.975, sd of the mean degree ~ 0.22.
  CHECK(std::abs(row.mean_degree - 5.0) < 0.9);

  const std::vector<ManifestRow> rows{{"a", 3, 2, 1.5, 2, "ok", ""},
                                      {"b", 0, 0, 0.0, 0, "failed", "line 3: bad\nthing, \"quoted\""}};
  const auto back = parse_manifest_csv(manifest_csv(rows));
  REQUIRE(back.size() == 2);
  CHECK(back[0] == rows[0]);
  CHECK(back[1].reason == "line 3: bad thing, \"quoted\"");
}

TEST_CASE("directedness hint") {
  CHECK(directedness_hint("# impactfield: undirected\na b\n") == false);
  CHECK(directedness_hint("  #impactfield: directed  \r\na b\n") == true);
  CHECK(directedness_hint("# generator: x\n\n# impactfield: undirected\na b\n") == false);
  CHECK_FALSE(directedness_hint("a b\n# impactfield: undirected\n").has_value());
  CHECK_FALSE(directedness_hint("").has_value());
}

TEST_CASE("generate writes parseable, reproducible files") {
  ScratchDir tmp;
  std::ostringstream out, err;
  GeneratorSpec er0{GeneratorKind::kErdosRenyi, 5, 0.0, 1, false, 1};
  REQUIRE(cmd_generate(er0, tmp / "er0.txt", out, err) == 0);
  const auto text = slurp(tmp / "er0.txt");
  std::size_t edge_lines = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) edge_lines += !line.empty() && line[0] != '#';
  CHECK(edge_lines == 0);

  GeneratorSpec pa{GeneratorKind::kPreferential, 50, 0.0, 2, false, 3};
  REQUIRE(cmd_generate(pa, tmp / "pa.txt", out, err) == 0);
  const Graph g = load_edge_list(tmp / "pa.txt");
  CHECK_FALSE(g.directed());
  CHECK(g.edge_count() == 97);
  CHECK(g == generate_preferential(50, 2, 3));

  GeneratorSpec er{GeneratorKind::kErdosRenyi, 200, 0.025, 1, true, 7};
  REQUIRE(cmd_generate(er, tmp / "a.txt", out, err) == 0);
  REQUIRE(cmd_generate(er, tmp / "b.txt", out, err) == 0);
  CHECK(slurp(tmp / "a.txt") == slurp(tmp / "b.txt"));
  CHECK(load_edge_list(tmp / "a.txt").directed());

  GeneratorSpec invalid{GeneratorKind::kErdosRenyi, 5, 1.5, 1, false, 1};
  CHECK(cmd_generate(invalid, tmp / "bad.txt", out, err) == 1);
  invalid = {GeneratorKind::kPreferential, 5, 0.0, 0, false, 1};
  CHECK(cmd_generate(invalid, tmp / "bad.txt", out, err) == 1);
  CHECK_FALSE(fs::exists(tmp / "bad.txt"));
}

TEST_CASE("replicate over a small corpus") {
  ScratchDir tmp;
  std::ostringstream out, err;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    GeneratorSpec spec{GeneratorKind::kErdosRenyi, 40, 0.1, 1, true, s};
    REQUIRE(cmd_generate(spec, tmp / "corpus" / ("net" + std::to_string(s) + ".txt"), out, err) == 0);
  }
  ReplicateConfig c;
  c.corpus = tmp / "corpus";
  c.out_dir = tmp / "run1";
  c.workers = 2;
  REQUIRE(cmd_replicate(c, out, err) == 0);

  const auto corr = parse_correlations_csv(slurp(tmp / "run1" / "correlations.csv"));
  CHECK(corr.size() == 3 * 2 * 5 * 2);
  for (std::size_t k = 1; k < corr.size(); ++k) {
    const auto key = [](const CorrelationRecord& r) {
      return std::make_tuple(r.network, static_cast<int>(r.treatment), r.gamma, r.order);
    };
    CHECK(key(corr[k - 1]) < key(corr[k]));
  }
  const auto manifest = parse_manifest_csv(slurp(tmp / "run1" / "manifest.csv"));
  REQUIRE(manifest.size() == 3);
  CHECK(manifest[0].network == "net1");
  CHECK(manifest[2].status == "ok");
  CHECK(parse_fits_csv(slurp(tmp / "run1" / "fits.csv")).size() == 30);
  CHECK(parse_curves_csv(slurp(tmp / "run1" / "curves.csv")).size() > 30);

  c.out_dir = tmp / "run2";
  c.workers = 1;
  REQUIRE(cmd_replicate(c, out, err) == 0);
  for (const char* f : {"curves.csv", "fits.csv", "correlations.csv", "manifest.csv"}) {
    CHECK(slurp(tmp / "run1" / f) == slurp(tmp / "run2" / f));
  }
}

TEST_CASE("replicate logs per-network failures and continues") {
  ScratchDir tmp;
  std::ostringstream out, err;
  spit(tmp / "corpus" / "a_bad.txt", "a b\nb b\n");
  spit(tmp / "corpus" / "b_empty.txt", "# impactfield: undirected\n");
  spit(tmp / "corpus" / "c_ring.txt", "# impactfield: undirected\n1 2\n2 3\n3 4\n4 5\n5 1\n");
  spit(tmp / "corpus" / ".hidden", "junk");
  ReplicateConfig c;
  c.corpus = tmp / "corpus";
  c.out_dir = tmp / "out";
  REQUIRE(cmd_replicate(c, out, err) == 0);
  const auto manifest = parse_manifest_csv(slurp(tmp / "out" / "manifest.csv"));
  REQUIRE(manifest.size() == 3);
  CHECK(manifest[0].status == "failed");
  CHECK(manifest[0].reason.find("self-loop") != std::string::npos);
  CHECK(manifest[1].status == "failed");
  CHECK(manifest[1].reason.find("normalize") != std::string::npos);
  CHECK(manifest[2].status == "ok");
  CHECK(manifest[2].diameter == 2);
  const auto corr = parse_correlations_csv(slurp(tmp / "out" / "correlations.csv"));
  CHECK(corr.size() == 10);
  CHECK(corr[0].n_dyads == 20);

  spit(tmp / "empty_corpus" / ".keep", "");
  c.corpus = tmp / "empty_corpus";
  std::ostringstream err2;
  CHECK(cmd_replicate(c, out, err2) == 1);
  CHECK(err2.str().find("no inputs") != std::string::npos);

  c.corpus = tmp / "nowhere";
  CHECK(cmd_replicate(c, out, err2) == 1);
}
