#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(TILTLAB_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t k;
    while ((k = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), k);
    int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sharp and reduce") {
    Run r = run("sharp --p 2 --n 3 t");
    CHECK(r.status == 0);
    CHECK(r.out == "⟨0 | 1 | 0⟩ @ p-power-roots, n=3\n");
    // [t] reduces to t sharp, which is p
    Run w = run("reduce --p 3 --n 2 \"[t; 0]\"");
    CHECK(w.status == 0);
    CHECK(w.out == run("sharp --p 3 --n 2 t").out);
    CHECK(w.out == "⟨0 | 1⟩ @ p-power-roots, n=2\n");
}

TEST_CASE("distinguished check") {
    Run r = run("check-distinguished --p 3 --untilt cyclotomic --n 2");
    CHECK(r.status == 0);
    CHECK(r.out.find("distinguished: true") != std::string::npos);
}

TEST_CASE("translate reports the class") {
    Run r = run("translate --p 2 --n 1 --emit-class \"E x:W (x = x)\"");
    CHECK(r.status == 0);
    CHECK(r.out.find("existential-positive") != std::string::npos);
}

TEST_CASE("finite evaluation") {
    CHECK(run("eval --p 2 --structure wn --n 2 --sig witt-pair \"E x:W (x * x = 1 + 1)\"").out.find("false") !=
          std::string::npos);
    CHECK(run("eval --p 3 --structure fq \"E x (x * x = 1 + 1)\"").out.find("false") != std::string::npos);
    CHECK(run("eval --p 3 --structure fq \"E x (x * x = 1)\"").out.find("true") != std::string::npos);
}

TEST_CASE("solve emits stable JSON") {
    const std::string args = "solve --p 2 --mode residue --eq \"x^2 - x\" --neq x --json";
    Run a = run(args), b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"status\": \"witness\"") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run("sharp --p 4 t").status == 1);
    CHECK(run("translate --p 2 \"E x (x = \"").status == 1);
    CHECK(run("no-such-command").status == 2);
    CHECK(run("eval --p 5 --structure wn --n 3 --budget 10 --sig witt-pair \"A x:W (A y:W (x * y = y * x))\"").status == 3);
}

}  // TEST_SUITE
