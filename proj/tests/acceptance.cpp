// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "secidx/cli.hpp"
#include "secidx/cone.hpp"
#include "secidx/errors.hpp"
#include "secidx/conventional.hpp"
#include "secidx/formats.hpp"
#include "secidx/gotp.hpp"
#include "secidx/linreduce.hpp"
#include "secidx/secure.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace secidx;
namespace fs = std::filesystem;

namespace {

// Pinned budgets and tolerances.
constexpr double kShannonSeconds = 60.0;
constexpr double kXorSeconds = 1.0;
constexpr double kPrivateKeysSeconds = 60.0;
constexpr std::size_t kRoundTrips = 120;
constexpr double kMarkingSeconds = 600.0;
constexpr double kMiTolerance = 1e-9;
constexpr std::size_t kPinSystems = 1000;
constexpr double kCycleSeconds = 300.0;
constexpr std::uint64_t kInnerSearchNodes = std::uint64_t{1} << 20;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

struct CliRun {
    int code;
    json report;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    json report;
    try {
        report = json::parse(out.str());
    } catch (const json::exception&) {
    }
    return {code, report};
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "secidx_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_json(const fs::path& path, const json& j) {
    std::ofstream(path) << j.dump();
    return path.string();
}

std::string rate_arg(const RateVector& r) {
    std::string s;
    for (const auto& q : r.flatten()) s += (s.empty() ? "" : ",") + format_rational(q);
    return s;
}

Caps single_thread() {
    Caps caps = Caps::from_env();
    caps.jobs = 1;
    return caps;
}

// Codes produced along the way, reused by the hierarchy and cone checks.
std::vector<SecureCode> g_codes;
// Draws whose inner min-rank search exceeded kInnerSearchNodes.
std::size_t g_inner_skipped = 0;

Outcome shannon() {
    Outcome o;
    for (std::size_t l1 : {1u, 2u}) {
        const Instance inst(2, {{}}, {l1});
        for (std::size_t lk = 0; lk <= 3; ++lk) {
            const KeyProfile keys{lk, {0}, 0};
            const auto code = find_secure_table_code_any_length(inst, keys);
            if (code.has_value() != (lk >= l1)) {
                o.fail("l_1=" + std::to_string(l1) + " l_k=" + std::to_string(lk));
                continue;
            }
            if (code) {
                if (!verify_perfect_secrecy(*code).pass || !verify_decoding(*code).pass) o.fail("found code fails verify");
                g_codes.push_back(*code);
            }
        }
    }
    return o;
}

Outcome xor_instance(const fs::path& data, const fs::path& dir) {
    Outcome o;
    const CliRun m = cli({"minrank", (data / "xor.json").string()});
    if (m.code != kExitOk || m.report.at("l_star") != 1 || m.report.at("witness_rows") != json::array({json::array({1, 1})})) {
        o.fail("minrank report");
    }
    const std::string code_file = (dir / "xor_code.json").string();
    const CliRun g = cli({"gotp", (data / "xor.json").string(), (data / "keys_xor.json").string(), "--out", code_file});
    if (g.code != kExitOk) {
        o.fail("gotp exit " + std::to_string(g.code));
        return o;
    }
    std::ifstream in(code_file);
    const SecureCode code = secure_code_from_json(json::parse(in));
    if (!verify_perfect_secrecy(code).pass) o.fail("not perfectly secure");
    if (!verify_decoding(code).pass) o.fail("not decodable");
    g_codes.push_back(code);
    return o;
}

Outcome private_keys_only() {
    Outcome o;
    const Instance xr(2, {{1}, {0}}, {1, 1});
    const Instance none(2, {{}, {}}, {1, 1});
    const KeyProfile keys{0, {1, 1}, 0};
    for (const Instance& inst : {xr, none}) {
        TableSearchStats stats;
        if (find_secure_table_code(inst, keys, 1, Caps::from_env(), &stats)) o.fail("found a code of length 1");
        const BlockLayout layout = BlockLayout::of(inst, keys);
        const CodeMatrix pad(FieldMatrix::from_rows({{1, 0, 1, 0}, {0, 1, 0, 1}}), layout);
        const auto code = make_linear_secure_code(inst, pad);
        if (!code || !verify_perfect_secrecy(*code).pass || !verify_decoding(*code).pass) {
            o.fail("per-message pad fails");
        } else {
            g_codes.push_back(*code);
        }
    }
    return o;
}

std::optional<SecureCode> random_construction(gen::Rng& rng) {
    const std::size_t t = gen::uniform(rng, 1, 4);
    std::vector<std::size_t> len(t);
    std::size_t total = 0;
    for (auto& l : len) {
        l = std::min<std::size_t>(gen::uniform(rng, 0, 3), 8 - total);
        total += l;
    }
    const Instance inst = gen::instance(rng, t, len, 0.5);
    // expansion starts from a code without private keys
    const bool expand = gen::uniform(rng, 0, 2) == 0;
    KeyProfile keys = KeyProfile::none(t);
    if (!expand) {
        for (std::size_t i = 0; i < t; ++i) keys.l_ki[i] = gen::uniform(rng, 0, len[i] + 1);
    }
    const auto reduced = inst.with_msg_len(reduced_lengths(inst, keys));
    Caps caps = Caps::from_env();
    caps.search_nodes = kInnerSearchNodes;
    std::optional<MinRankResult> inner;
    try {
        inner = min_rank(reduced, reduced.total_len(), caps);
    } catch (const CapExceeded&) {
        ++g_inner_skipped;
        return std::nullopt;
    }
    if (!inner) return std::nullopt;
    keys.l_k = inner->length + gen::uniform(rng, 0, 1);
    SecureCode code = construct_gotp(inst, keys, inner->witness);
    if (expand) {
        std::vector<std::size_t> extra(t);
        for (auto& e : extra) e = gen::uniform(rng, 0, 1);
        code = expand_with_private_keys(code, extra);
    }
    if (code.layout().total() > 16) return std::nullopt;
    return code;
}

Outcome round_trips() {
    Outcome o;
    gen::Rng rng(2024);
    std::size_t done = 0;
    while (done < kRoundTrips) {
        const auto code = random_construction(rng);
        if (!code) continue;
        ++done;
        g_codes.push_back(*code);
        const MarkedForm mf = to_standard_form(code->instance, code->matrix());
        const BlockLayout& b = mf.matrix.layout;
        if (mf.matrix.length() != b.l_k + b.keys().private_total()) o.fail("standard length");
        if (b.l_w != 0) o.fail("randomness left");
        if (mf.matrix.key_part() != FieldMatrix::identity(b.key_width())) o.fail("key block not identity");
        const Extraction ex = extract_conventional(code->instance, mf);
        if (ex.code.length() != b.l_k) o.fail("conventional length");
        for (std::size_t i = 0; i < code->instance.t(); ++i) {
            const std::size_t li = code->instance.msg_len(i);
            if (ex.code.instance.msg_len(i) != (li > b.l_ki[i] ? li - b.l_ki[i] : 0)) o.fail("reduced message length");
        }
        if (!verify_zero_error(ex.code).pass) o.fail("extracted code not zero-error");
    }
    if (o.pass) o.detail = std::to_string(done) + " codes, " + std::to_string(g_inner_skipped) + " draws skipped at the search cap";
    return o;
}

Outcome marking() {
    Outcome o;
    const Caps caps = single_thread();
    ReduceOptions opts;
    opts.reverify = false;
    opts.caps = caps;
    std::uint64_t checked = 0;
    std::uint64_t secure = 0;
    for (std::size_t cols = 1; cols <= 7; ++cols) {
        const std::uint32_t n_rows = (1u << cols) - 1;
        for (std::size_t key_width = 0; key_width <= cols; ++key_width) {
            for (std::size_t l_w = 0; l_w <= std::min<std::size_t>(1, key_width); ++l_w) {
                const Instance inst(2, {{}}, {cols - key_width});
                const KeyProfile keys{key_width - l_w, {0}, l_w};
                const BlockLayout layout = BlockLayout::of(inst, keys);
                const std::uint32_t key_mask = (1u << key_width) - 1;
                // row sets as strictly increasing nonzero bit patterns; bit k is column k
                std::vector<std::uint32_t> rows;
                std::function<void(std::uint32_t)> visit = [&](std::uint32_t next) {
                    if (!rows.empty()) {
                        std::uint32_t used = 0;
                        for (auto r : rows) used |= r;
                        FieldMatrix pi(rows.size(), cols);
                        for (std::size_t r = 0; r < rows.size(); ++r) {
                            for (std::size_t c = 0; c < cols; ++c) pi.set(r, c, (rows[r] >> c) & 1);
                        }
                        if ((used & key_mask) == key_mask && rank(pi) == rows.size()) {
                            const CodeMatrix cm(pi, layout);
                            bool marked = true;
                            try {
                                echelon_mark(inst, cm, opts);
                            } catch (const SecurityViolation&) {
                                marked = false;
                            }
                            const bool perfect = verify_perfect_secrecy(linear_code_with_partial_decoders(inst, cm), caps).pass;
                            if (marked != perfect) o.fail("mismatch at cols=" + std::to_string(cols));
                            ++checked;
                            secure += perfect;
                        }
                    }
                    if (rows.size() == 3) return;
                    for (std::uint32_t r = next; r <= n_rows; ++r) {
                        rows.push_back(r);
                        visit(r + 1);
                        rows.pop_back();
                    }
                };
                visit(1);
            }
        }
    }
    if (o.pass) o.detail = std::to_string(checked) + " matrices, " + std::to_string(secure) + " secure";
    return o;
}

Outcome hierarchy() {
    Outcome o;
    gen::Rng rng(7);
    std::vector<SecureCode> codes = g_codes;
    // random linear codes, most of them leaky, some with encoder randomness
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t t = gen::uniform(rng, 1, 3);
        std::vector<std::size_t> len(t);
        for (auto& l : len) l = gen::uniform(rng, 0, 2);
        const Instance inst = gen::instance(rng, t, len);
        KeyProfile keys{gen::uniform(rng, 0, 2), std::vector<std::size_t>(t), gen::uniform(rng, 0, 1)};
        for (auto& k : keys.l_ki) k = gen::uniform(rng, 0, 1);
        const BlockLayout layout = BlockLayout::of(inst, keys);
        codes.push_back(linear_code_with_partial_decoders(
            inst, CodeMatrix(gen::matrix(rng, gen::uniform(rng, 1, 4), layout.total()), layout)));
    }
    std::size_t perfect = 0;
    for (const auto& code : codes) {
        if (!verify_perfect_secrecy(code).pass) continue;
        ++perfect;
        const JointDist joint = joint_of(code);
        if (total_variation(joint) != 0) o.fail("perfect code with tv > 0");
        const MutualInformation mi = mutual_information(joint);
        if (mi.error_bound > kMiTolerance) o.fail("error bound above tolerance");
        if (std::abs(mi.bits) > mi.error_bound) o.fail("I(M;C) above its error bound");
    }
    if (o.pass) o.detail = std::to_string(perfect) + " of " + std::to_string(codes.size()) + " codes perfectly secure";
    return o;
}

Outcome pinning() {
    Outcome o;
    gen::Rng rng(5);
    std::size_t done = 0;
    std::size_t attempts = 0;
    while (done < kPinSystems && ++attempts < 100 * kPinSystems) {
        const std::size_t n = gen::uniform(rng, 1, 6);
        const std::size_t m = gen::uniform(rng, 0, 4);
        const std::size_t l = gen::uniform(rng, 0, 6);
        const std::size_t l1 = gen::uniform(rng, 0, 4);
        const auto a = gen::matrix(rng, l, n);
        const auto b = gen::matrix(rng, l, m);
        const auto c = gen::matrix(rng, l1, n);
        const auto d = gen::matrix(rng, l1, m);
        if (!recoverable(a.vstack(c), b.vstack(d))) continue;
        ++done;
        const auto s = pin_subset(a, b, c, d);
        if (s.size() > l1) o.fail("|S| > l_1");
        if (!oracle::recovers(gen::to_mat(a), gen::to_mat(b), {s.begin(), s.end()}, n, m, 2)) o.fail("X not recovered");
    }
    if (done < kPinSystems) o.fail("too few recoverable systems drawn");
    if (o.pass) o.detail = std::to_string(done) + " systems";
    return o;
}

Outcome five_cycle(const fs::path& data) {
    Outcome o;
    const Instance pentagon = parse_instance(R"({"t":5,"side_info":[[5,2],[1,3],[2,4],[3,5],[4,1]]})");
    const CliRun p = cli({"minrank", (data / "pentagon.json").string()});
    if (p.code != kExitOk || p.report.at("l_star") != 3) o.fail("pentagon min-rank != 3");
    if (oracle::some_linear_code(pentagon, 2)) o.fail("oracle found a length-2 pentagon code");
    if (!oracle::some_linear_code(pentagon, 3)) o.fail("oracle found no length-3 pentagon code");
    const Instance cycle = parse_instance(R"({"t":5,"side_info":[[5],[1],[2],[3],[4]]})");
    const CliRun c = cli({"minrank", (data / "cycle5.json").string()});
    if (c.code != kExitOk || c.report.at("l_star") != 4) o.fail("one-predecessor cycle min-rank != 4");
    if (oracle::some_linear_code(cycle, 3)) o.fail("oracle found a length-3 cycle code");
    if (o.pass) o.detail = "pentagon 3 (2 infeasible), one-predecessor cycle 4 (3 infeasible)";
    return o;
}

Outcome cone(const fs::path& data, const fs::path& dir) {
    Outcome o;
    std::size_t in = 0;
    std::size_t out = 0;
    auto expect = [&](const std::string& inst_file, const RateVector& r, const char* verdict) {
        const CliRun run = cli({"cone", inst_file, rate_arg(r)});
        if (run.code != kExitOk || run.report.at("verdict") != verdict) {
            o.fail(fs::path(inst_file).filename().string() + " " + rate_arg(r) + " not " + verdict);
        }
        (std::string(verdict) == "in-cone" ? in : out) += 1;
    };
    auto check_code = [&](const std::string& inst_file, const SecureCode& code) {
        const RateVector r = code.rate();
        expect(inst_file, r, "in-cone");
        // push receiver 0 beyond the normalized bound
        RateVector over = r;
        over.msg[0] = r.private_keys[0] + (r.key == 0 ? Rational(1) : r.key * 2);
        expect(inst_file, over, "out-of-cone");
    };
    for (const auto& entry : fs::directory_iterator(data)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("keys_", 0) == 0) continue;
        std::ifstream in_file(entry.path());
        const Instance inst = instance_from_json(json::parse(in_file));
        const auto conv = min_rank(inst, inst.total_len());
        if (!conv) {
            o.fail("no code for " + name);
            continue;
        }
        check_code(entry.path().string(), pad_conventional(conv->witness, conv->length));
    }
    std::size_t k = 0;
    for (const auto& code : g_codes) {
        if (code.code_len == 0 || code.instance.t() == 0) continue;
        const std::string inst_file = write_json(dir / ("inst" + std::to_string(k++) + ".json"), instance_to_json(code.instance));
        check_code(inst_file, code);
    }
    if (o.pass) o.detail = std::to_string(in) + " in-cone, " + std::to_string(out) + " out-of-cone";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path data = argc > 1 ? fs::path(argv[1]) : fs::path(SECIDX_TEST_DATA);
    const fs::path dir = scratch_dir();
    bool all = true;
    auto report = [&](int id, const char* name, double limit, const std::function<Outcome()>& body) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (limit > 0 && secs > limit) o.fail("took " + std::to_string(secs) + " s");
        all = all && o.pass;
        std::printf("%s %d %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
        std::fflush(stdout);
    };
    report(1, "shannon-condition", kShannonSeconds, shannon);
    report(2, "xor-instance", kXorSeconds, [&] { return xor_instance(data, dir); });
    report(3, "private-keys-only", kPrivateKeysSeconds, private_keys_only);
    report(4, "standard-form-round-trip", 0, round_trips);
    report(5, "secrecy-iff-marking", kMarkingSeconds, marking);
    report(6, "secrecy-hierarchy", 0, hierarchy);
    report(7, "pin-subset", 0, pinning);
    report(8, "five-cycle-min-rank", kCycleSeconds, [&] { return five_cycle(data); });
    report(9, "cone-consistency", 0, [&] { return cone(data, dir); });
    fs::remove_all(dir);
    return all ? 0 : 1;
}
