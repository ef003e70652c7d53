#include "secidx/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "secidx/cone.hpp"
#include "secidx/conventional.hpp"
#include "secidx/errors.hpp"
#include "secidx/formats.hpp"
#include "secidx/gotp.hpp"
#include "secidx/linreduce.hpp"
#include "secidx/secure.hpp"

namespace secidx {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(ParseErrorKind::Malformed, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError(ParseErrorKind::Malformed, "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

json load_json(const std::string& path) { return parse_json_text(read_file(path)); }

// "a/b", an integer, or a decimal such as 0.01, as an exact rational.
Rational parse_threshold(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos) return parse_rational(text);
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos ||
        (!whole.empty() && whole.find_first_not_of("0123456789") != std::string::npos)) {
        throw ParseError(ParseErrorKind::Malformed, "bad number '" + text + "'");
    }
    BigInt scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    std::string digits = whole + frac;
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
    return Rational(BigInt(digits.empty() ? "0" : digits), scale);
}

json rho_json(const std::vector<std::optional<Rational>>& rho) {
    json out = json::array();
    for (const auto& r : rho) out.push_back(r ? json(format_rational(*r)) : json("inf"));
    return out;
}

json one_based(const std::vector<std::vector<std::size_t>>& sets) {
    json out = json::array();
    for (const auto& s : sets) {
        json row = json::array();
        for (std::size_t x : s) row.push_back(x + 1);
        out.push_back(std::move(row));
    }
    return out;
}

struct Globals {
    unsigned jobs = 0;
    std::string cap;
    std::uint64_t seed = 0;

    Caps caps() const {
        Caps c = Caps::from_env();
        c.jobs = jobs;
        if (!cap.empty()) {
            const auto v = parse_cap(cap);
            if (!v) throw ParseError(ParseErrorKind::Malformed, "bad --cap value '" + cap + "'");
            c.enumeration = *v;
            c.verification = *v;
            c.search_nodes = *v;
        }
        return c;
    }
};

int cmd_minrank(const Globals& g, const std::string& instance_file, std::optional<std::size_t> max_l, bool nonlinear,
                const std::string& out_file, std::ostream& out, std::ostream& err) {
    const Instance inst = parse_instance(read_file(instance_file));
    const Caps caps = g.caps();
    json report{{"command", "minrank"}, {"method", nonlinear ? "nonlinear" : "linear"}};
    if (nonlinear) {
        const auto best = brute_force_optimal(inst, caps);
        report["l_star"] = best.exponent;
        report["nodes"] = best.nodes;
        const json witness = table_code_to_json(best.witness);
        if (!out_file.empty()) {
            write_file(out_file, witness);
            report["witness_file"] = out_file;
        } else {
            report["witness_file"] = nullptr;
            report["witness"] = witness;
        }
        out << report.dump(2) << '\n';
        return kExitOk;
    }
    const std::size_t limit = max_l.value_or(inst.total_len());
    const auto best = min_rank(inst, limit, caps);
    if (!best) {
        report["l_star"] = nullptr;
        report["reason"] = "no linear code of length <= " + std::to_string(limit);
        err << report["reason"].get<std::string>() << '\n';
        out << report.dump(2) << '\n';
        return kExitInfeasible;
    }
    report["l_star"] = best->length;
    report["nodes"] = best->stats.nodes;
    json per = json::array();
    for (const auto& [l, n] : best->stats.per_length) per.push_back({{"l", l}, {"nodes", n}});
    report["per_length"] = per;
    report["witness_rows"] = best->witness.encoder.to_rows();
    if (!out_file.empty()) {
        write_file(out_file, linear_code_to_json(best->witness));
        report["witness_file"] = out_file;
    } else {
        report["witness_file"] = nullptr;
    }
    out << report.dump(2) << '\n';
    return kExitOk;
}

int cmd_verify(const Globals& g, const std::string& code_file, const std::string& metric, const std::string& eps_text,
               std::ostream& out) {
    const SecureCode code = secure_code_from_json(load_json(code_file));
    const Caps caps = g.caps();
    const Rational eps = parse_threshold(eps_text);
    const bool all = metric == "all";
    json report{{"command", "verify"}, {"metric", metric}, {"eps", format_rational(eps)}};
    bool pass = true;
    if (all || metric == "perfect") {
        const auto r = verify_perfect_secrecy(code, caps);
        report["perfect"] = r.pass;
        report["witness"] = nullptr;
        if (r.witness) report["witness"] = {{"m", r.witness->m}, {"m_prime", r.witness->m_prime}, {"c", r.witness->c}};
        pass = pass && r.pass;
    }
    if (all || metric == "strong" || metric == "weak") {
        const JointDist joint = joint_of(code, {}, caps);
        if (all || metric == "strong") {
            const Rational tv = total_variation(joint);
            report["tv"] = format_rational(tv);
            report["strong"] = tv <= eps;
            pass = pass && tv <= eps;
        }
        if (all || metric == "weak") {
            const auto mi = mutual_information(joint);
            const double h = message_entropy(joint);
            const bool ok = mi.bits <= eps.convert_to<double>() * h + mi.error_bound;
            report["mi_bits"] = mi.bits;
            report["mi_err"] = mi.error_bound;
            report["h_m_bits"] = h;
            report["weak"] = ok;
            pass = pass && ok;
        }
    }
    if (all || metric == "decode") {
        const auto d = verify_decoding(code, caps);
        report["decodes"] = d.pass;
        report["perr"] = format_rational(error_probability(code, nullptr, caps));
        report["decode_failure"] = nullptr;
        if (d.failure) {
            report["decode_failure"] = {{"m", d.failure->m}, {"keys", d.failure->key_inputs}, {"receiver", d.failure->receiver + 1}};
        }
        pass = pass && d.pass;
    }
    report["pass"] = pass;
    out << report.dump(2) << '\n';
    return pass ? kExitOk : kExitInfeasible;
}

int cmd_gotp(const Globals& g, const std::string& instance_file, const std::string& keys_file,
             std::optional<std::size_t> max_l, const std::string& out_file, std::ostream& out, std::ostream& err) {
    const Instance inst = parse_instance(read_file(instance_file));
    const KeyProfile keys = key_profile_for(load_json(keys_file), inst);
    if (keys.l_w != 0) throw ParseError(ParseErrorKind::Malformed, "the construction takes no encoder randomness (l_w must be 0)");
    const Caps caps = g.caps();
    const Feasibility f = gotp_feasible(inst, keys, max_l, caps);
    json report{{"command", "gotp"}, {"feasible", f.feasible}};
    if (!f.feasible) {
        report["reason"] = f.reason;
        err << "infeasible: " << f.reason << '\n';
        out << report.dump(2) << '\n';
        return kExitInfeasible;
    }
    std::vector<std::string> warnings;
    const SecureCode code = construct_gotp(inst, keys, *f.inner, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    report["l"] = code.code_len;
    report["inner_length"] = f.inner->length();
    report["reduced_msg_len"] = f.reduced.msg_len();
    report["rate"] = code.code_len > 0 ? rate_vector_to_json(code.rate()) : json(nullptr);
    report["warnings"] = warnings;
    const json file = secure_code_to_json(code);
    if (!out_file.empty()) {
        write_file(out_file, file);
        report["code_file"] = out_file;
    } else {
        report["code"] = file;
    }
    out << report.dump(2) << '\n';
    return kExitOk;
}

int cmd_reduce(const Globals& g, const std::string& code_file, const std::string& out_prefix, std::ostream& out) {
    const SecureCode code = secure_code_from_json(load_json(code_file));
    if (!code.is_linear()) throw ParseError(ParseErrorKind::Malformed, "reduce needs a linear code file");
    ReduceOptions opts;
    opts.caps = g.caps();
    const MarkedForm mf = to_standard_form(code.instance, code.matrix(), opts);
    const Extraction ex = extract_conventional(code.instance, mf, opts.caps);
    const BlockLayout& layout = mf.matrix.layout;
    json report{{"command", "reduce"},
                {"l", mf.matrix.length()},
                {"l_k", layout.l_k},
                {"l_ki", layout.l_ki},
                {"reduced_msg_len", ex.code.instance.msg_len()},
                {"pinned", one_based(ex.pinned)}};
    json sf = marked_form_to_json(mf);
    sf["side_info"] = instance_to_json(code.instance)["side_info"];
    sf["kind"] = "linear";
    const json conv = linear_code_to_json(ex.code);
    if (!out_prefix.empty()) {
        write_file(out_prefix + ".standard.json", sf);
        write_file(out_prefix + ".conventional.json", conv);
        report["standard_file"] = out_prefix + ".standard.json";
        report["conventional_file"] = out_prefix + ".conventional.json";
    } else {
        report["standard_form"] = sf;
        report["conventional"] = conv;
    }
    out << report.dump(2) << '\n';
    return kExitOk;
}

int cmd_cone(const Globals& g, const std::string& instance_file, const std::string& rates_arg, std::size_t max_block,
             std::ostream& out) {
    const Instance inst = parse_instance(read_file(instance_file));
    RateVector rates;
    if (std::filesystem::is_regular_file(rates_arg)) {
        const json j = load_json(rates_arg);
        rates = rate_vector_from_json(j.is_object() ? j.at("rate") : j);
    } else {
        rates = parse_rate_vector(rates_arg);
    }
    if (rates.msg.size() != inst.t()) {
        throw ParseError(ParseErrorKind::Malformed, "rate vector needs 2t+1 = " + std::to_string(2 * inst.t() + 1) + " entries");
    }
    const ConeResult res = cone_membership(inst, rates, max_block, g.caps());
    json report{{"command", "cone"}, {"verdict", to_string(res.verdict)}, {"rho", rho_json(res.rho)}, {"reason", res.reason}};
    if (res.witness) {
        report["block_length"] = res.block_length;
        report["msg_len"] = res.msg_len;
        report["witness_rows"] = res.witness->encoder.to_rows();
    }
    out << report.dump(2) << '\n';
    return kExitOk;
}

int cmd_report(const Globals& g, const std::string& code_file, std::ostream& out) {
    const SecureCode code = secure_code_from_json(load_json(code_file));
    const SecrecyReport r = secrecy_report(code, g.caps());
    json report = secrecy_report_to_json(r);
    report["command"] = "report";
    report["kind"] = code.is_linear() ? "linear" : "table";
    report["l"] = code.code_len;
    report["keys"] = key_profile_to_json(code.keys);
    report["rate"] = code.code_len > 0 ? rate_vector_to_json(code.rate()) : json(nullptr);
    out << report.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Perfectly secure index coding toolkit", "secidx"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--jobs", g.jobs, "Worker threads (default: all cores)");
    app.add_option("--cap", g.cap, "Enumeration cap, an integer or 2^k (overrides SECIDX_CAP)");
    app.add_option("--seed", g.seed, "Seed for randomized sampling; every pipeline here is deterministic");

    std::string instance_file;
    std::string code_file;
    std::string keys_file;
    std::string out_file;
    std::string rates;
    std::string metric = "all";
    std::string eps = "0";
    std::optional<std::size_t> max_l;
    std::size_t max_block = 12;
    bool nonlinear = false;

    auto* minrank = app.add_subcommand("minrank", "Optimal conventional code length (min-rank)");
    minrank->add_option("instance", instance_file, "Instance file")->required();
    minrank->add_option("--max-l", max_l, "Longest code length to try");
    minrank->add_flag("--nonlinear", nonlinear, "Search all (nonlinear) codes instead of linear ones");
    minrank->add_option("--out", out_file, "Write the witness code here");

    auto* verify = app.add_subcommand("verify", "Check secrecy and decoding of a secure code");
    verify->add_option("code", code_file, "Secure code file")->required();
    verify->add_option("--metric", metric, "perfect|strong|weak|decode|all")
        ->check(CLI::IsMember({"perfect", "strong", "weak", "decode", "all"}));
    verify->add_option("--eps", eps, "Threshold for strong (tv <= eps) and weak (I <= eps H(M)) secrecy");

    auto* gotp = app.add_subcommand("gotp", "Build a secure code by one-time padding a conventional code");
    gotp->add_option("instance", instance_file, "Instance file")->required();
    gotp->add_option("keys", keys_file, "Key profile file")->required();
    gotp->add_option("--max-l", max_l, "Longest acceptable public length");
    gotp->add_option("--out", out_file, "Write the code here");

    auto* reduce = app.add_subcommand("reduce", "Standard form and hidden conventional code of a linear secure code");
    reduce->add_option("code", code_file, "Linear secure code file")->required();
    reduce->add_option("--out", out_file, "Output prefix for <prefix>.standard.json and <prefix>.conventional.json");

    auto* cone = app.add_subcommand("cone", "Decide whether a secure rate vector is achievable");
    cone->add_option("instance", instance_file, "Instance file")->required();
    cone->add_option("rates", rates, "r_1..r_t,r_k,r_k1..r_kt as comma separated rationals, or a JSON file")->required();
    cone->add_option("--max-block", max_block, "Longest block length for the witness search");

    auto* report = app.add_subcommand("report", "Full secrecy and decoding report of a secure code");
    report->add_option("code", code_file, "Secure code file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (*minrank) return cmd_minrank(g, instance_file, max_l, nonlinear, out_file, out, err);
        if (*verify) return cmd_verify(g, code_file, metric, eps, out);
        if (*gotp) return cmd_gotp(g, instance_file, keys_file, max_l, out_file, out, err);
        if (*reduce) return cmd_reduce(g, code_file, out_file, out);
        if (*cone) return cmd_cone(g, instance_file, rates, max_block, out);
        if (*report) return cmd_report(g, code_file, out);
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << '\n';
        return kExitCap;
    } catch (const ParseError& e) {
        err << "input error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const SecurityViolation& e) {
        err << "input code is not perfectly secure: " << e.what() << '\n';
        return kExitInput;
    } catch (const DecodabilityLost& e) {
        err << "input code is not decodable: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace secidx
