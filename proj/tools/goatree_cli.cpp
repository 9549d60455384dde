// Command-line front end: solve, recognize, generate, verify.
//
// Exit codes: 0 = computed successfully (including "not in family"),
// 1 = verification found a mismatch, 2 = input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "goatree/goatree.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";

using nlohmann::json;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw goatree::ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// FNV-1a, hex; stable fingerprint of the raw input text.
std::string digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json envelope(const std::string& command, const std::string& input_text, json result) {
    return json{{"command", command},
                {"input_digest", digest(input_text)},
                {"tool_version", kToolVersion},
                {"result", std::move(result)}};
}

std::string set_to_string(const goatree::VertexSet& s) {
    std::string out = "{";
    bool first = true;
    for (int v : s.members()) {
        if (!first) out += ",";
        out += std::to_string(v);
        first = false;
    }
    return out + "}";
}

json trace_to_json(const goatree::ConstructionTrace& trace) {
    json ops = json::array();
    for (const auto& op : trace.ops) {
        std::visit(
            [&](const auto& rec) {
                using R = std::decay_t<decltype(rec)>;
                if constexpr (std::is_same_v<R, goatree::O1Rec>)
                    ops.push_back({{"op", "O1"}, {"support", rec.support}});
                if constexpr (std::is_same_v<R, goatree::O2Rec>)
                    ops.push_back({{"op", "O2"}, {"support", rec.support}});
                if constexpr (std::is_same_v<R, goatree::O3Rec>)
                    ops.push_back({{"op", "O3"},
                                   {"support", rec.support_w},
                                   {"leaf", rec.leaf_v},
                                   {"k", rec.k}});
                if constexpr (std::is_same_v<R, goatree::O4Rec>)
                    ops.push_back({{"op", "O4"}, {"w", rec.w}, {"star_sizes", rec.star_sizes}});
            },
            op);
    }
    return json{{"base", "P3"}, {"ops", std::move(ops)}};
}

int cmd_solve(const std::string& path, int brute_force_cap, bool as_json) {
    std::string text = read_input(path);
    goatree::Tree t = goatree::Tree::parse_edge_list(text);
    goatree::AllianceReport rep = goatree::analyze(t);
    long brute_count = -1;
    if (t.size() <= brute_force_cap) {
        auto bf = goatree::min_goa_bruteforce(t, brute_force_cap);
        brute_count = static_cast<long>(bf.min_sets.size());
        if (bf.gamma != rep.gamma || rep.unique != (brute_count == 1)) {
            std::cerr << "internal error: solver disagrees with brute force\n";
            return 1;
        }
    }
    if (as_json) {
        json result{{"n", t.size()},
                    {"gamma", rep.gamma},
                    {"unique", rep.unique},
                    {"witness", rep.witness.members()}};
        if (brute_count >= 0) result["minimum_set_count"] = brute_count;
        std::cout << envelope("solve", text, std::move(result)).dump(2) << "\n";
    } else {
        std::cout << "gamma=" << rep.gamma << " unique=" << (rep.unique ? "true" : "false");
        if (rep.unique) std::cout << " set=" << set_to_string(rep.witness);
        if (brute_count >= 0) std::cout << " minimum_sets=" << brute_count;
        std::cout << "\n";
    }
    return 0;
}

int cmd_recognize(const std::string& path, const std::string& trace_out, bool as_json) {
    std::string text = read_input(path);
    goatree::Tree t = goatree::Tree::parse_edge_list(text);
    goatree::RecognitionResult rr = goatree::decompose(t);
    std::string trace_text;
    if (rr.kind == goatree::RecognitionResult::Kind::certificate)
        trace_text = goatree::to_text(rr.trace);
    if (!trace_out.empty() && !trace_text.empty()) {
        std::ofstream out(trace_out);
        out << trace_text;
    }
    if (as_json) {
        json result;
        switch (rr.kind) {
            case goatree::RecognitionResult::Kind::trivial_k1:
                result = {{"status", "K1"}};
                break;
            case goatree::RecognitionResult::Kind::certificate:
                result = {{"status", "IN_FAMILY"},
                          {"trace", trace_to_json(rr.trace)},
                          {"a_set", rr.a_set.members()}};
                break;
            case goatree::RecognitionResult::Kind::not_in_family:
                result = {{"status", "NOT_IN_FAMILY"},
                          {"reason", rr.reason == goatree::RejectReason::not_unique ? "NotUnique"
                                     : rr.reason == goatree::RejectReason::is_p2
                                         ? "IsP2"
                                         : "ShapeAssertionFailed"},
                          {"detail", rr.detail}};
                break;
        }
        std::cout << envelope("recognize", text, std::move(result)).dump(2) << "\n";
    } else {
        switch (rr.kind) {
            case goatree::RecognitionResult::Kind::trivial_k1:
                std::cout << "K1\n";
                break;
            case goatree::RecognitionResult::Kind::certificate:
                std::cout << "IN_FAMILY a_set=" << set_to_string(rr.a_set) << "\n" << trace_text;
                break;
            case goatree::RecognitionResult::Kind::not_in_family:
                std::cout << "NOT_IN_FAMILY "
                          << (rr.reason == goatree::RejectReason::not_unique ? "NotUnique"
                              : rr.reason == goatree::RejectReason::is_p2 ? "IsP2"
                                                                         : "ShapeAssertionFailed")
                          << "\n";
                break;
        }
    }
    return 0;
}

int cmd_generate(std::uint64_t seed, int ops, const std::string& from_trace, bool as_json) {
    goatree::FTree f =
        from_trace.empty()
            ? goatree::random_trace(seed, ops)
            : goatree::replay(goatree::trace_from_text(read_input(from_trace)));
    if (as_json) {
        json result{{"n", f.tree.size()},
                    {"edges", json::array()},
                    {"a_set", f.a_set.members()},
                    {"trace", trace_to_json(f.trace)}};
        for (auto [u, v] : f.tree.edges()) result["edges"].push_back({u, v});
        std::cout << envelope("generate", from_trace.empty() ? std::to_string(seed) : from_trace,
                              std::move(result))
                         .dump(2)
                  << "\n";
    } else {
        std::cout << f.tree.to_edge_list() << "a_set=" << set_to_string(f.a_set) << "\n"
                  << goatree::to_text(f.trace);
    }
    return 0;
}

int cmd_verify(int max_n, int jobs, const std::string& csv_path, bool as_json) {
    auto rows = goatree::verify_theorem(max_n, jobs);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        out << goatree::verification_csv(rows, /*with_elapsed=*/true);
    }
    if (as_json) {
        json result = json::array();
        for (const auto& r : rows)
            result.push_back({{"n", r.n},
                              {"trees_total", r.trees_total},
                              {"ugoa_count", r.ugoa_count},
                              {"mismatches", r.mismatches},
                              {"certificate_failures", r.certificate_failures}});
        std::cout << envelope("verify", std::to_string(max_n), std::move(result)).dump(2) << "\n";
    } else {
        // stdout omits the timing column so runs are byte-comparable
        std::cout << goatree::verification_csv(rows, /*with_elapsed=*/false);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum global offensive alliance toolkit for trees"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string path = "-";
    int brute_force_cap = 0;
    bool as_json = false;
    auto* solve = app.add_subcommand("solve", "Compute gamma_o, a witness, and uniqueness");
    solve->add_option("input", path, "edge-list file, or - for stdin");
    solve->add_option("--brute-force-cap", brute_force_cap,
                      "cross-check against exhaustive search when n <= cap");
    solve->add_flag("--json", as_json, "structured output");

    std::string rec_path = "-";
    std::string trace_out;
    bool rec_json = false;
    auto* recognize = app.add_subcommand("recognize", "Decide membership in the family");
    recognize->add_option("input", rec_path, "edge-list file, or - for stdin");
    recognize->add_option("--trace-out", trace_out, "write the construction trace to a file");
    recognize->add_flag("--json", rec_json, "structured output");

    std::uint64_t seed = 0;
    int ops = 8;
    std::string from_trace;
    bool gen_json = false;
    auto* generate = app.add_subcommand("generate", "Build a family member");
    generate->add_option("--seed", seed, "PRNG seed");
    generate->add_option("--ops", ops, "number of construction operations");
    generate->add_option("--from-trace", from_trace, "replay a serialized trace instead");
    generate->add_flag("--json", gen_json, "structured output");

    int max_n = 10, jobs = 1;
    std::string csv_path;
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "Exhaustively check the characterization");
    verify->add_option("--max-n", max_n, "largest tree order to verify");
    verify->add_option("--jobs", jobs, "worker threads");
    verify->add_option("--csv", csv_path, "write rows (with timings) to a CSV file");
    verify->add_flag("--json", verify_json, "structured output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(path, brute_force_cap, as_json);
        if (recognize->parsed()) return cmd_recognize(rec_path, trace_out, rec_json);
        if (generate->parsed()) return cmd_generate(seed, ops, from_trace, gen_json);
        if (verify->parsed()) return cmd_verify(max_n, jobs, csv_path, verify_json);
    } catch (const goatree::VerificationFailure& e) {
        std::cerr << "verification mismatch: " << e.what() << "\n";
        return 1;
    } catch (const goatree::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const goatree::NotATreeError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const goatree::TooLarge& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const goatree::OperationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
