#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "conflev/format.hpp"
#include "conflev/inference.hpp"
#include "conflev/table.hpp"
#include "json.hpp"

using namespace conflev;

namespace {

// Published row used throughout: means 4.48 / 5.55, t = 2.40, starred p,
// total n = 42. Recovered scale: se = |5.55 - 4.48| / 2.40, df = 40.
const std::string kFixtureCsv = "label,mean_a,mean_b,t,p,n\n"
                                "identify,4.48,5.55,2.40,*,42\n";

const std::vector<Hypothesis> kHyps = {Hypothesis::greater_than(0.0),
                                       Hypothesis::less_than(0.0),
                                       Hypothesis::greater_than(1.0)};

ResultsRow fixture_row() {
    auto report = parse_results_csv(kFixtureCsv);
    REQUIRE(report.errors.empty());
    REQUIRE(report.rows.size() == 1);
    return report.rows[0];
}

bool has_note_with(const AnnotatedRow& row, const std::string& needle) {
    for (const auto& n : row.notes)
        if (n.find(needle) != std::string::npos) return true;
    return false;
}

std::string thrown_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("star convention: parsing and lookup") {
    const StarConvention def;
    CHECK(def.one == 0.05);
    CHECK(def.two == 0.01);
    CHECK(def.three == 0.001);
    CHECK(def.threshold_for(1) == 0.05);
    CHECK(def.threshold_for(2) == 0.01);
    CHECK(def.threshold_for(3) == 0.001);

    const auto loose = StarConvention::parse("0.1, 0.05, 0.01");
    CHECK(loose.one == 0.1);
    CHECK(loose.two == 0.05);
    CHECK(loose.three == 0.01);

    CHECK_THROWS_AS(StarConvention::parse("0.05,0.01"), std::domain_error);
    CHECK_THROWS_AS(StarConvention::parse("0.05,0.01,0.001,0.0001"), std::domain_error);
    CHECK_THROWS_AS(StarConvention::parse("0.05,junk,0.001"), std::domain_error);
    CHECK_THROWS_AS(StarConvention::parse("0.05,0.05,0.001"), std::domain_error);  // not strict
    CHECK_THROWS_AS(StarConvention::parse("0.001,0.01,0.05"), std::domain_error);  // increasing
    CHECK_THROWS_AS(StarConvention::parse("1.5,0.01,0.001"), std::domain_error);   // outside (0,1)
    CHECK_THROWS_AS(def.threshold_for(0), std::domain_error);
    CHECK_THROWS_AS(def.threshold_for(4), std::domain_error);
}

TEST_CASE("csv parse: fixture row lands intact") {
    const auto row = fixture_row();
    CHECK(row.label == "identify");
    CHECK(row.mean_a == 4.48);
    CHECK(row.mean_b == 5.55);
    CHECK(row.t_value == 2.40);
    CHECK(!row.p_value.has_value());
    CHECK(row.p_bound == 0.05);  // "*" under the default convention
    CHECK(row.p_display == "*");
    CHECK(row.n_total == 42);
    CHECK(!row.se.has_value());
    CHECK(!row.df.has_value());
}

TEST_CASE("csv parse: header aliases, case folding, unknown columns") {
    const auto report = parse_results_csv(
        "Name,Mean1,Mean2,T_Value,P_Value,N_Total,SE,DF,study_year\n"
        "aliased,1.0,2.5,3.0,0.004,30,0.5,28,1999\n");
    CHECK(report.errors.empty());
    REQUIRE(report.rows.size() == 1);
    const auto& row = report.rows[0];
    CHECK(row.label == "aliased");
    CHECK(row.mean_a == 1.0);
    CHECK(row.mean_b == 2.5);
    CHECK(row.t_value == 3.0);
    CHECK(row.p_value == 0.004);
    CHECK(row.n_total == 30);
    CHECK(row.se == 0.5);
    CHECK(row.df == 28.0);  // study_year ignored without complaint
}

TEST_CASE("csv parse: p column accepts stars, inequalities, ns, numbers") {
    const auto report = parse_results_csv(
        "label,p\n"
        "exact,0.03\n"
        "one,*\n"
        "two,**\n"
        "three,***\n"
        "lt,<0.05\n"
        "none,ns\n"
        "NONE,NS\n"
        "unit,1\n");
    CHECK(report.errors.empty());
    REQUIRE(report.rows.size() == 8);
    CHECK(report.rows[0].p_value == 0.03);
    CHECK(report.rows[1].p_bound == 0.05);
    CHECK(report.rows[2].p_bound == 0.01);
    CHECK(report.rows[3].p_bound == 0.001);
    CHECK(report.rows[4].p_bound == 0.05);
    CHECK(report.rows[4].p_display == "<0.05");
    CHECK(!report.rows[5].p_value.has_value());
    CHECK(!report.rows[5].p_bound.has_value());
    CHECK(report.rows[5].p_display == "ns");
    CHECK(!report.rows[6].p_bound.has_value());
    CHECK(report.rows[7].p_value == 1.0);  // p = 1 is a legal exact p

    // Custom convention rebinds the tokens.
    const auto custom = parse_results_csv("label,p\nrow,**\n", StarConvention::parse("0.1,0.02,0.002"));
    CHECK(custom.rows[0].p_bound == 0.02);
}

TEST_CASE("csv parse: fatal errors vs recoverable line errors") {
    CHECK_THROWS_AS(parse_results_csv(""), std::runtime_error);
    CHECK_THROWS_AS(parse_results_csv("alpha,beta,gamma\n1,2,3\n"), std::runtime_error);

    // Bad cells poison only their own line; neighbours survive.
    const auto report = parse_results_csv(
        "label,t,p,n,se,df\n"
        "good,2.0,0.04,20,,\n"
        "badp,2.0,1.7,20,,\n"
        "badt,oops,0.04,20,,\n"
        "badn,2.0,0.04,12.5,,\n"
        "badse,2.0,0.04,20,-1,\n"
        "baddf,2.0,0.04,20,,0\n"
        "\n"
        "trailing,1.5,0.1,18,,\n");
    CHECK(report.rows.size() == 2);
    CHECK(report.rows[0].label == "good");
    CHECK(report.rows[1].label == "trailing");
    REQUIRE(report.errors.size() == 5);
    CHECK(report.errors[0].find("line 3") != std::string::npos);
    CHECK(report.errors[0].find("outside (0,1]") != std::string::npos);
    CHECK(report.errors[1].find("line 4") != std::string::npos);
    CHECK(report.errors[1].find("bad t value 'oops'") != std::string::npos);
    CHECK(report.errors[2].find("positive integer") != std::string::npos);
    CHECK(report.errors[3].find("se must be > 0") != std::string::npos);
    CHECK(report.errors[4].find("df must be > 0") != std::string::npos);
}

TEST_CASE("csv parse: quoted labels keep commas and escaped quotes") {
    const auto report = parse_results_csv(
        "label,p\n"
        "\"sleep, deprivation \"\"study\"\"\",0.02\n");
    CHECK(report.errors.empty());
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].label == "sleep, deprivation \"study\"");
    CHECK(report.rows[0].p_value == 0.02);
}

TEST_CASE("annotate: fixture row takes the full path") {
    const auto ann = annotate_row(fixture_row(), kHyps, 0.95);

    REQUIRE(ann.statements.size() == 3);
    for (const auto& st : ann.statements) CHECK(st.kind == StatementKind::Exact);
    CHECK(ann.statements[0].hypothesis == Hypothesis::greater_than(0.0));
    CHECK(ann.statements[0].confidence == doctest::Approx(0.9894296100161157).epsilon(1e-12));
    CHECK(ann.statements[1].confidence == doctest::Approx(0.010570389983884322).epsilon(1e-9));
    CHECK(ann.statements[2].confidence == doctest::Approx(0.5619863338727696).epsilon(1e-12));

    REQUIRE(ann.two_tailed_p.has_value());
    CHECK(*ann.two_tailed_p == doctest::Approx(0.021140779967768645).epsilon(1e-12));

    REQUIRE(ann.interval.has_value());
    CHECK(ann.interval->lo == doctest::Approx(0.1689372218217865).epsilon(1e-9));
    CHECK(ann.interval->hi == doctest::Approx(1.9710627781782137).epsilon(1e-12));
    CHECK(ann.interval->level == 0.95);

    CHECK(has_note_with(ann, "df = n_total - 2 = 40"));
    CHECK(has_note_with(ann, "se = |mean_b - mean_a| / t"));

    // The annotation must agree bit-for-bit with assembling the summary by hand.
    const double est = 5.55 - 4.48;
    const double se = std::fabs(est / 2.4);
    const SampleSummary direct(est, se, DistFamily::student_t(40.0), "identify");
    const auto cd = confidence_distribution(direct);
    CHECK(ann.statements[0].confidence ==
          confidence_level(cd, Hypothesis::greater_than(0.0)).confidence);
    CHECK(ann.statements[2].confidence ==
          confidence_level(cd, Hypothesis::greater_than(1.0)).confidence);
    CHECK(*ann.two_tailed_p == two_tailed_p(direct));
    const auto [lo, hi] = confidence_interval(cd, 0.95);
    CHECK(ann.interval->lo == lo);
    CHECK(ann.interval->hi == hi);
}

TEST_CASE("annotate: explicit se and df columns beat recovery") {
    const auto report = parse_results_csv(
        "label,mean_a,mean_b,t,n,se,df\n"
        "explicit,0,1,2.0,50,0.5,10\n");
    REQUIRE(report.rows.size() == 1);
    const auto ann = annotate_row(report.rows[0], {Hypothesis::greater_than(0.0)}, 0.9);

    // No recovery notes: both values came straight from the table.
    CHECK(!has_note_with(ann, "n_total - 2"));
    CHECK(!has_note_with(ann, "|mean_b - mean_a| / t"));

    const SampleSummary direct(1.0, 0.5, DistFamily::student_t(10.0));
    CHECK(*ann.two_tailed_p == two_tailed_p(direct));
    CHECK(ann.statements[0].confidence ==
          confidence_level(confidence_distribution(direct), Hypothesis::greater_than(0.0))
              .confidence);
    CHECK(ann.interval->level == 0.9);
}

TEST_CASE("annotate: between hypothesis on a full row") {
    const auto ann =
        annotate_row(fixture_row(), {Hypothesis::between(0.0, 1.0)}, 0.95);
    REQUIRE(ann.statements.size() == 1);
    // mass below 1 minus mass below 0 on the shifted t40.
    const double expect = 0.43801366612723044 - 0.010570389983884322;
    CHECK(ann.statements[0].confidence == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("annotate: exact p rows convert through the p path") {
    const auto report = parse_results_csv("label,p\nponly,0.021140779967768645\n");
    REQUIRE(report.rows.size() == 1);
    const auto ann = annotate_row(report.rows[0], kHyps, 0.95);

    // Only the two sides of zero are reachable from a bare p.
    REQUIRE(ann.statements.size() == 2);
    CHECK(ann.statements[0].hypothesis == Hypothesis::greater_than(0.0));
    CHECK(ann.statements[0].confidence == 1.0 - 0.021140779967768645 / 2.0);
    CHECK(ann.statements[0].kind == StatementKind::Exact);
    CHECK(ann.statements[0].source == "converted from two-tailed p");
    CHECK(ann.statements[1].hypothesis == Hypothesis::less_than(0.0));
    CHECK(ann.statements[1].confidence == doctest::Approx(0.021140779967768645 / 2.0));
    CHECK(*ann.two_tailed_p == 0.021140779967768645);
    CHECK(!ann.interval.has_value());
    CHECK(has_note_with(ann, "direction assumed nonnegative"));
    CHECK(has_note_with(ann, "'x > 1' skipped"));
    CHECK(has_note_with(ann, "no interval available"));
}

TEST_CASE("annotate: p recovered from t and df when the scale is missing") {
    const auto report = parse_results_csv("label,t,n\ntrec,2.40,42\n");
    REQUIRE(report.rows.size() == 1);
    const auto ann = annotate_row(report.rows[0], {Hypothesis::greater_than(0.0)}, 0.95);
    REQUIRE(ann.statements.size() == 1);
    CHECK(ann.statements[0].confidence == doctest::Approx(0.9894296100161157).epsilon(1e-12));
    CHECK(*ann.two_tailed_p == doctest::Approx(0.021140779967768645).epsilon(1e-12));
    CHECK(has_note_with(ann, "p recovered from t and df"));
    CHECK(!ann.interval.has_value());

    // Negative t flips the favored side.
    const auto neg = parse_results_csv("label,t,n\nnegt,-2.40,42\n");
    const auto nann = annotate_row(neg.rows[0], {Hypothesis::greater_than(0.0)}, 0.95);
    CHECK(nann.statements[0].confidence ==
          doctest::Approx(0.021140779967768645 / 2.0).epsilon(1e-12));
}

TEST_CASE("annotate: star-only rows yield a single lower bound") {
    const auto report = parse_results_csv("label,p\nstarry,*\n");
    REQUIRE(report.rows.size() == 1);
    const auto ann = annotate_row(report.rows[0], kHyps, 0.95);

    REQUIRE(ann.statements.size() == 1);
    CHECK(ann.statements[0].hypothesis == Hypothesis::greater_than(0.0));
    CHECK(ann.statements[0].kind == StatementKind::LowerBound);
    CHECK(ann.statements[0].confidence == 0.975);  // 1 - 0.05/2, exactly
    CHECK(!ann.interval.has_value());
    CHECK(!ann.two_tailed_p.has_value());
    CHECK(has_note_with(ann, "'x < 0' skipped"));
    CHECK(has_note_with(ann, "bound only, no interval"));

    // A negative t beside the stars points the bound at the other side.
    const auto neg = parse_results_csv("label,t,p\nnegstar,-3.1,**\n");
    const auto nann = annotate_row(neg.rows[0], {Hypothesis::less_than(0.0)}, 0.95);
    REQUIRE(nann.statements.size() == 1);
    CHECK(nann.statements[0].hypothesis == Hypothesis::less_than(0.0));
    CHECK(nann.statements[0].kind == StatementKind::LowerBound);
    CHECK(nann.statements[0].confidence == 0.995);
}

TEST_CASE("annotate: t = 0 with equal means degrades to confidence one half") {
    const auto report = parse_results_csv("label,mean_a,mean_b,t,n\nflat,3,3,0,20\n");
    REQUIRE(report.rows.size() == 1);
    const auto ann = annotate_row(report.rows[0], {Hypothesis::greater_than(0.0)}, 0.95);
    REQUIRE(ann.statements.size() == 1);
    CHECK(ann.statements[0].confidence == 0.5);
    CHECK(*ann.two_tailed_p == 1.0);
    CHECK(has_note_with(ann, "p recovered from t and df"));
}

TEST_CASE("annotate: unprocessable rows name what is missing") {
    const auto only_label = parse_results_csv("label,p\nnothing,ns\n");
    REQUIRE(only_label.rows.size() == 1);
    CHECK_THROWS_AS(annotate_row(only_label.rows[0], kHyps, 0.95), std::invalid_argument);
    const auto msg = thrown_message(
        [&] { annotate_row(only_label.rows[0], kHyps, 0.95); });
    CHECK(msg.find("unprocessable") != std::string::npos);
    CHECK(msg.find("se") != std::string::npos);
    CHECK(msg.find("df(or n)") != std::string::npos);

    // Means alone give an estimate but no scale, dof or p.
    const auto means = parse_results_csv("label,mean_a,mean_b\nm,1,2\n");
    CHECK_THROWS_AS(annotate_row(means.rows[0], kHyps, 0.95), std::invalid_argument);
}

TEST_CASE("emit: json report carries the full annotation") {
    std::vector<AnnotatedRow> rows;
    rows.push_back(annotate_row(fixture_row(), kHyps, 0.95));
    const auto star = parse_results_csv("label,p\nstarry,*\n");
    rows.push_back(annotate_row(star.rows[0], {Hypothesis::greater_than(0.0)}, 0.95));

    const std::string text = emit_report(rows, ReportFormat::JSON);
    CHECK(text.back() == '\n');
    const auto doc = nlohmann::json::parse(text);  // must be valid JSON

    CHECK(doc["schema_version"] == 1);
    REQUIRE(doc["rows"].size() == 2);

    const auto& r0 = doc["rows"][0];
    CHECK(r0["label"] == "identify");
    CHECK(r0["input"]["mean_a"] == 4.48);
    CHECK(r0["input"]["p_display"] == "*");
    CHECK(r0["input"]["n"] == 42);
    CHECK(r0["two_tailed_p"].get<double>() ==
          doctest::Approx(0.021140779967768645).epsilon(1e-12));
    REQUIRE(r0["statements"].size() == 3);
    CHECK(r0["statements"][0]["hypothesis"]["form"] == "greater_than");
    CHECK(r0["statements"][0]["hypothesis"]["threshold"] == 0.0);
    CHECK(r0["statements"][0]["hypothesis"]["text"] == "x > 0");
    CHECK(r0["statements"][0]["confidence"].get<double>() ==
          doctest::Approx(0.9894296100161157).epsilon(1e-12));
    CHECK(r0["statements"][0]["kind"] == "exact");
    CHECK(r0["interval"]["lo"].get<double>() ==
          doctest::Approx(0.1689372218217865).epsilon(1e-9));
    CHECK(r0["interval"]["hi"].get<double>() ==
          doctest::Approx(1.9710627781782137).epsilon(1e-12));
    CHECK(r0["interval"]["level"] == 0.95);
    CHECK(r0["notes"].is_array());
    CHECK(!r0["notes"].empty());

    const auto& r1 = doc["rows"][1];
    CHECK(r1["statements"][0]["kind"] == "lower_bound");
    CHECK(r1["statements"][0]["confidence"] == 0.975);
    CHECK(!r1.contains("interval"));
}

TEST_CASE("emit: text report reads as confidence sentences") {
    std::vector<AnnotatedRow> rows;
    rows.push_back(annotate_row(fixture_row(), kHyps, 0.95));
    const auto star = parse_results_csv("label,p\nstarry,*\n");
    rows.push_back(annotate_row(star.rows[0], {Hypothesis::greater_than(0.0)}, 0.95));

    const std::string text = emit_report(rows, ReportFormat::Text);
    CHECK(text.find("identify: confidence (x > 0) = 98.9%") != std::string::npos);
    CHECK(text.find("confidence (x < 0) = 1.1%") != std::string::npos);
    CHECK(text.find("confidence (x > 1) = 56.2%") != std::string::npos);
    CHECK(text.find("95% interval (0.169, 1.97)") != std::string::npos);
    CHECK(text.find("starry: confidence (x > 0) > 97.5%") != std::string::npos);
    CHECK(text.find("  note: star row: bound only, no interval") != std::string::npos);
}

TEST_CASE("emit: csv report survives a parse-annotate round trip byte for byte") {
    const auto parsed = parse_results_csv(
        "label,mean_a,mean_b,t,p,n\n"
        "identify,4.48,5.55,2.40,*,42\n"
        "ponly,,,,0.0042,\n"
        "negstar,,,-3.1,**,\n");
    REQUIRE(parsed.errors.empty());
    REQUIRE(parsed.rows.size() == 3);

    std::vector<AnnotatedRow> rows;
    for (const auto& r : parsed.rows) rows.push_back(annotate_row(r, kHyps, 0.95));
    const std::string csv1 = emit_report(rows, ReportFormat::CSV);

    CHECK(csv1.find("label,mean_a,mean_b,t,p,n,se,df,two_tailed_p") == 0);
    CHECK(csv1.find("conf(x > 0)") != std::string::npos);
    CHECK(csv1.find(">0.995") != std::string::npos);  // bound statements keep the '>' marker

    const auto reparsed = parse_results_csv(csv1);
    REQUIRE(reparsed.errors.empty());
    REQUIRE(reparsed.rows.size() == 3);
    std::vector<AnnotatedRow> again;
    for (const auto& r : reparsed.rows) again.push_back(annotate_row(r, kHyps, 0.95));
    CHECK(emit_report(again, ReportFormat::CSV) == csv1);
}

TEST_CASE("emit: empty report lists are legal in every format") {
    CHECK(emit_report({}, ReportFormat::Text) == "");
    const auto doc = nlohmann::json::parse(emit_report({}, ReportFormat::JSON));
    CHECK(doc["rows"].empty());
    const auto csv = emit_report({}, ReportFormat::CSV);
    CHECK(csv.find("label,") == 0);
}

TEST_CASE("hypothesis flags parse and reject cleanly") {
    CHECK(parse_hypothesis("gt:0") == Hypothesis::greater_than(0.0));
    CHECK(parse_hypothesis("lt:1.5") == Hypothesis::less_than(1.5));
    CHECK(parse_hypothesis("between:0,1") == Hypothesis::between(0.0, 1.0));
    CHECK(parse_hypothesis("GT: -2.5 ") == Hypothesis::greater_than(-2.5));
    CHECK(parse_hypothesis("between: -1 , 1 ") == Hypothesis::between(-1.0, 1.0));

    CHECK_THROWS_AS(parse_hypothesis("gt"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hypothesis("gte:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hypothesis("gt:abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hypothesis("gt:1.5x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hypothesis("between:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hypothesis("between:2,1"), std::domain_error);
    CHECK_THROWS_AS(parse_hypothesis(""), std::invalid_argument);
}

TEST_CASE("number formatting: shortest round trip and percent rounding") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(40.0) == "40");
    CHECK(format_number(0.44583333333333336) == "0.44583333333333336");
    CHECK(format_percent(0.975) == "97.5%");
    CHECK(format_percent(0.95, 0) == "95%");
    CHECK(format_percent(0.9894296100161157) == "98.9%");
    CHECK(format_percent(0.005, 0) == "1%");  // half rounds away from zero
}
