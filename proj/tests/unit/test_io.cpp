#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "pda/core.hpp"
#include "pda/errors.hpp"
#include "pda/io.hpp"
#include "pda/nds.hpp"

using namespace pda;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name, const std::string& content) {
    const auto dir = fs::temp_directory_path() / "pda_io_tests";
    fs::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("csv parsing: quotes, comments and headers") {
        const auto t = parse_csv("# comment\na,\"b,c\",\"say \"\"hi\"\"\"\n\n1,2,3\n4,5,\"6\"\n");
        CHECK(t.header == std::vector<std::string>{"a", "b,c", "say \"hi\""});
        REQUIRE(t.rows.size() == 2);
        CHECK(t.rows[1] == std::vector<std::string>{"4", "5", "6"});

        const auto no_header = parse_csv("1;2\n3;4\n", {';', HeaderMode::detect});
        CHECK(no_header.header.empty());
        CHECK(no_header.rows.size() == 2);
        const auto forced = parse_csv("1,2\n3,4\n", {',', HeaderMode::present});
        CHECK(forced.header == std::vector<std::string>{"1", "2"});
        const auto multi = parse_csv("x\r\n\"line\nbreak\"\r\n", {',', HeaderMode::present});
        CHECK(multi.rows[0][0] == "line\nbreak");

        CHECK_THROWS_AS(parse_csv("1,2\n3\n"), DataError);
        CHECK_THROWS_AS(parse_csv("\"open,1\n"), DataError);
    }

    TEST_CASE("escaping round trips through the parser") {
        const std::vector<std::string> fields{"plain", "com,ma", "qu\"ote", "new\nline", ""};
        const auto text = "h1,h2,h3,h4,h5\n" + csv_row(fields);
        const auto t = parse_csv(text);
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0] == fields);
        CHECK(csv_escape("a;b", ';') == "\"a;b\"");
        CHECK(csv_escape("a;b") == "a;b");
    }

    TEST_CASE("numbers") {
        CHECK(parse_number("1.5e3", "x") == 1500.0);
        CHECK(parse_number(" -2 ", "x") == -2.0);
        CHECK_THROWS_AS(parse_number("nan", "x"), DataError);
        CHECK_THROWS_AS(parse_number("inf", "x"), DataError);
        CHECK_THROWS_AS(parse_number("1.5abc", "x"), DataError);
        CHECK_THROWS_AS(parse_number("", "x"), DataError);
        for (double v : {0.1, 1.0 / 3.0, 1e-300, -123456.789, 0.0}) {
            CHECK(parse_number(format_double(v), "x") == v);
        }
    }

    TEST_CASE("table datasets with and without labels") {
        const auto p = scratch("table.csv", "f1,f2,label\n0.5,1,0\n2,3,1\n");
        const auto d = read_table_dataset(p);
        CHECK(d.data.column_names == std::vector<std::string>{"f1", "f2"});
        REQUIRE(d.labels.has_value());
        CHECK(*d.labels == std::vector<int>{0, 1});
        CHECK(d.data.samples[1].features == std::vector<double>{2, 3});

        const auto bare = read_table_dataset(scratch("bare.csv", "1,2\n3,4\n5,6\n"));
        CHECK_FALSE(bare.labels.has_value());
        CHECK(bare.data.size() == 3);

        CHECK_THROWS_AS(read_table_dataset(scratch("nan.csv", "a,b\n1,NaN\n")), DataError);
        CHECK_THROWS_AS(read_table_dataset(scratch("text.csv", "a,b\n1,x\n")), DataError);
        CHECK_THROWS(read_table_dataset(fs::temp_directory_path() / "pda_io_tests" / "missing.csv"));
    }

    TEST_CASE("trajectory datasets") {
        const auto p = scratch("traj.csv",
                               "traj_id,t,x,y\nb,1,1,1\na,0,0,0\nb,0,0,0\na,1,3,4\na,2,3,5\n");
        const auto d = read_trajectory_dataset(p);
        REQUIRE(d.size() == 2);
        CHECK(d.samples[0].features == std::vector<double>{0, 0, 1, 1});
        CHECK(d.samples[1].features == std::vector<double>{0, 0, 3, 4, 3, 5});
        CHECK_THROWS_AS(read_trajectory_dataset(scratch("dup.csv", "traj_id,t,x,y\na,0,0,0\na,0,1,1\n")),
                        DataError);
        CHECK_THROWS_AS(read_trajectory_dataset(scratch("short.csv", "traj_id,t,x,y\na,0,0,0\n")), DataError);
    }

    TEST_CASE("metadata and atomic writes") {
        CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
        CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
        const OutputMetadata meta{"train", 7, "cfg"};
        const auto line = csv_metadata_line(meta);
        CHECK(line.rfind("# pda 0.1.0 command=train seed=7 config=fnv1a64:", 0) == 0);
        CHECK(line.back() == '\n');
        CHECK(config_digest("cfg") != config_digest("cfh"));

        const auto dir = fs::temp_directory_path() / "pda_io_tests";
        const auto target = dir / "atomic.txt";
        write_file_atomic(target, "first");
        write_file_atomic(target, "second");
        CHECK(read_file(target) == "second");
        std::size_t leftovers = 0;
        for (const auto& e : fs::directory_iterator(dir)) {
            leftovers += e.path().filename().string().find("atomic.txt.") == 0;
        }
        CHECK(leftovers == 0);
    }

    TEST_CASE("front dump lists every dyad with its front") {
        const PointSet pts(2, {1, 4, 2, 2, 3, 3});
        const DyadSet dyads(pts, {{0, 1}, {0, 2}, {1, 2}});
        const auto fa = non_dominated_sort(pts);
        const auto text = front_dump_csv(dyads, fa, OutputMetadata{"train", std::nullopt, ""});
        const auto t = parse_csv(text);
        CHECK(t.header == std::vector<std::string>{"dyad_index", "i", "j", "c1", "c2", "front"});
        REQUIRE(t.rows.size() == 3);
        CHECK(t.rows[2] == std::vector<std::string>{"2", "1", "2", "3", "3", "2"});
    }
}
