// Copyright 2026 The relfacts Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// relfacts command-line driver: list, run and sweep scenarios.
//
//   relfacts list [--json]
//   relfacts run <name> [--param k=v]... [--format json|csv] [--output path]
//                       [--seed N] [--tol k=v]... [--emit-config]
//   relfacts run --config file.json [...]
//   relfacts sweep <name> --axis k=start..stop,count | k=a..b | k=a,b,c
//                         [--param k=v]... [--strict=false]
//
// Errors go to stderr as one JSON line; exit codes 2 usage, 3 validation,
// 4 capacity, 5 numeric.

#include "relfacts/relfacts.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rf = relfacts;

namespace {

void report_error(rf::ErrorCode code, const std::string &message) {
    std::cerr << "{\"error\":" << rf::json_quote(rf::error_code_name(code))
              << ",\"code\":" << static_cast<int>(code)
              << ",\"message\":" << rf::json_quote(message) << "}\n";
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_double(const std::string &text, const std::string &what) {
    const auto t = trim(text);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
        throw rf::ValidationError(what + ": '" + text + "' is not a number");
    }
    if (!std::isfinite(v)) {
        throw rf::ValidationError(what + ": value must be finite");
    }
    return v;
}

std::pair<std::string, std::string> split_kv(const std::string &item, const char *flag) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw rf::UsageError(std::string(flag) + " expects key=value, got '" + item + "'");
    }
    return {trim(item.substr(0, eq)), item.substr(eq + 1)};
}

std::map<std::string, double> parse_params(const std::vector<std::string> &items) {
    std::map<std::string, double> out;
    for (const auto &item : items) {
        auto [k, v] = split_kv(item, "--param");
        if (out.count(k)) {
            throw rf::UsageError("parameter '" + k + "' given twice");
        }
        out[k] = parse_double(v, "parameter '" + k + "'");
    }
    return out;
}

rf::Tolerances parse_tolerances(const std::vector<std::string> &items) {
    rf::Tolerances tol;
    for (const auto &item : items) {
        auto [k, v] = split_kv(item, "--tol");
        const double x = parse_double(v, "tolerance '" + k + "'");
        if (x <= 0.0) {
            throw rf::ValidationError("tolerance '" + k + "' must be positive");
        }
        if (k == "validation") {
            tol.validation = x;
        } else if (k == "zero_branch") {
            tol.zero_branch = x;
        } else if (k == "null_branch") {
            tol.null_branch = x;
        } else {
            throw rf::UsageError("unknown tolerance '" + k +
                                 "' (validation, zero_branch, null_branch)");
        }
    }
    return tol;
}

void apply_dim_cap_env() {
    const char *env = std::getenv("RELFACTS_DIM_CAP");
    if (env == nullptr || *env == '\0') {
        return;
    }
    const std::string s = trim(env);
    std::uint64_t cap = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size() || cap < 1) {
        throw rf::UsageError("RELFACTS_DIM_CAP must be a positive integer");
    }
    rf::set_state_dim_cap(static_cast<std::size_t>(cap));
}

/// Writes to the --output file or stdout. Buffered content is flushed in one
/// piece, so a failed run never leaves half a document behind.
class Sink {
public:
    explicit Sink(const std::string &path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) {
                throw rf::ValidationError("cannot open output file '" + path + "'");
            }
        }
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }
    void write(const std::string &s) {
        stream() << s;
        stream().flush();
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

void cmd_list(bool as_json) {
    std::ostringstream os;
    const auto &cat = rf::scenario_catalog();
    if (as_json) {
        rf::json doc = rf::json::array();
        for (const auto &s : cat) {
            rf::json params = rf::json::array();
            for (const auto &p : s.params) {
                params.push_back({{"name", p.name},
                                  {"default", p.default_value},
                                  {"type", p.integer ? "integer" : "number"},
                                  {"description", p.description}});
            }
            doc.push_back(
                {{"name", s.name}, {"description", s.description}, {"parameters", params}});
        }
        os << doc.dump() << '\n';
    } else {
        for (const auto &s : cat) {
            os << s.name << "\n  " << s.description << '\n';
            for (const auto &p : s.params) {
                os << "  --param " << p.name << '=' << rf::format_number(p.default_value)
                   << (p.integer ? "  (integer) " : "  ") << p.description << '\n';
            }
        }
    }
    std::cout << os.str();
}

struct RunOptions {
    std::string name;
    std::string config;
    std::vector<std::string> params;
    std::vector<std::string> tols;
    std::string format = "json";
    std::string output;
    std::uint64_t seed = 0;
    bool emit_config = false;
};

void cmd_run(const RunOptions &o) {
    if (o.name.empty() == o.config.empty()) {
        throw rf::UsageError("run needs exactly one of a scenario name or --config");
    }
    if (!o.config.empty() && !o.params.empty()) {
        throw rf::UsageError("--param does not apply to --config runs");
    }
    const auto tol = parse_tolerances(o.tols);
    const auto ns = o.config.empty() ? rf::build_scenario(o.name, parse_params(o.params), o.seed)
                                     : rf::load_scenario_file(o.config);
    std::ostringstream os;
    if (o.emit_config) {
        os << rf::scenario_to_json(ns).dump(2) << '\n';
    } else {
        const auto records = rf::run_plan(ns, tol);
        if (o.format == "json") {
            rf::write_json(os, ns.name, ns.parameters, records);
        } else {
            rf::write_csv(os, records);
        }
    }
    Sink(o.output).write(os.str());
}

struct Axis {
    std::string name;
    std::vector<double> values;
};

Axis parse_axis(const std::string &spec) {
    auto [name, rest] = split_kv(spec, "--axis");
    rest = trim(rest);
    if (rest.empty()) {
        throw rf::UsageError("axis '" + name + "' has no values");
    }
    Axis axis{name, {}};
    const auto dots = rest.find("..");
    if (dots == std::string::npos) {
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            axis.values.push_back(parse_double(item, "axis '" + name + "'"));
        }
    } else {
        const double start = parse_double(rest.substr(0, dots), "axis '" + name + "' start");
        const auto tail = rest.substr(dots + 2);
        const auto comma = tail.find(',');
        const double stop = parse_double(tail.substr(0, comma), "axis '" + name + "' stop");
        if (comma == std::string::npos) {
            // integer range, inclusive
            if (start != std::floor(start) || stop != std::floor(stop)) {
                throw rf::UsageError("axis '" + name +
                                     "': a..b without a count needs integer bounds");
            }
            for (double v = start; v <= stop; v += 1.0) {
                axis.values.push_back(v);
            }
        } else {
            const double c = parse_double(tail.substr(comma + 1), "axis '" + name + "' count");
            if (c < 1.0 || c != std::floor(c)) {
                throw rf::UsageError("axis '" + name + "': count must be a positive integer");
            }
            const auto count = static_cast<std::size_t>(c);
            for (std::size_t k = 0; k < count; ++k) {
                axis.values.push_back(
                    count == 1 ? start
                               : start + (stop - start) * static_cast<double>(k) /
                                             static_cast<double>(count - 1));
            }
        }
    }
    if (axis.values.empty()) {
        throw rf::UsageError("axis '" + name + "' has no values");
    }
    return axis;
}

struct SweepOptions {
    std::string name;
    std::string axis;
    std::vector<std::string> params;
    std::vector<std::string> tols;
    std::string format = "csv";
    std::string output;
    std::uint64_t seed = 0;
    bool strict = true;
};

/// One sweep row as ordered (column, value) pairs.
using Row = std::vector<rf::Field>;

Row pipeline_row(const std::map<std::string, double> &p, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(p.at("n_env"));
    const double phi = p.at("phi");
    const double jitter = std::abs(p.at("phi_jitter"));
    const auto model = jitter == 0.0 ? rf::EnvironmentModel::uniform(n, phi)
                                     : rf::EnvironmentModel::random(n, phi - jitter,
                                                                    phi + jitter, seed);
    const auto r = rf::sweep_row(rf::FriendTemplate::prepared_at(p.at("theta_prep")), model);
    return {{"n", static_cast<std::int64_t>(r.n)},
            {"epsilon", r.epsilon},
            {"bound", r.bound},
            {"deviation", r.deviation}};
}

Row generic_row(const std::string &name, const Axis &axis, double value,
                const std::map<std::string, double> &p, std::uint64_t seed,
                const rf::Tolerances &tol) {
    const auto ns = rf::build_scenario(name, p, seed);
    Row row{{axis.name, value}};
    for (const auto &rec : rf::run_plan(ns, tol)) {
        for (const auto &f : rec.fields) {
            row.push_back({rec.name + "." + f.key, f.value});
        }
    }
    return row;
}

void cmd_sweep(const SweepOptions &o) {
    const auto &info = rf::scenario_info(o.name);
    const auto axis = parse_axis(o.axis);
    bool declared = false;
    bool integer = false;
    for (const auto &p : info.params) {
        if (p.name == axis.name) {
            declared = true;
            integer = p.integer;
        }
    }
    if (!declared) {
        throw rf::UsageError("scenario '" + o.name + "' has no parameter '" + axis.name + "'");
    }
    auto base = parse_params(o.params);
    if (base.count(axis.name)) {
        throw rf::UsageError("'" + axis.name + "' is both swept and fixed by --param");
    }
    const auto tol = parse_tolerances(o.tols);
    const bool decoherence_columns = o.name == "pipeline" && axis.name == "n_env";
    // reject malformed axis values before any output
    for (double v : axis.values) {
        auto p = base;
        p[axis.name] = v;
        rf::resolve_parameters(o.name, p);
    }

    Sink sink(o.output);
    const bool csv = o.format == "csv";
    std::ostringstream json_rows;
    bool header_done = false;
    std::size_t emitted = 0;
    for (double v : axis.values) {
        auto p = base;
        p[axis.name] = v;
        Row row;
        try {
            if (decoherence_columns) {
                std::map<std::string, double> full;
                for (const auto &q : rf::resolve_parameters(o.name, p)) {
                    full[q.name] = q.value;
                }
                row = pipeline_row(full, o.seed);
            } else {
                row = generic_row(o.name, axis, v, p, o.seed, tol);
            }
        } catch (const rf::CapacityError &e) {
            const std::string where = "axis " + axis.name + "=" +
                                      (integer ? std::to_string(static_cast<long long>(v))
                                               : rf::format_number(v));
            if (o.strict) {
                throw rf::CapacityError(where + ": " + e.what());
            }
            report_error(rf::ErrorCode::Capacity, where + " skipped: " + e.what());
            continue;
        }
        if (csv) {
            std::ostringstream line;
            if (!header_done) {
                for (std::size_t k = 0; k < row.size(); ++k) {
                    line << (k ? "," : "") << rf::csv_cell(row[k].key);
                }
                line << '\n';
                header_done = true;
            }
            for (std::size_t k = 0; k < row.size(); ++k) {
                line << (k ? "," : "") << rf::format_value(row[k].value, false);
            }
            line << '\n';
            sink.write(line.str());
        } else {
            json_rows << (emitted ? "," : "") << '{';
            for (std::size_t k = 0; k < row.size(); ++k) {
                json_rows << (k ? "," : "") << rf::json_quote(row[k].key) << ':'
                          << rf::format_value(row[k].value, true);
            }
            json_rows << '}';
        }
        ++emitted;
    }
    if (!csv) {
        std::ostringstream doc;
        doc << "{\"scenario\":" << rf::json_quote(o.name)
            << ",\"axis\":" << rf::json_quote(axis.name) << ",\"rows\":[" << json_rows.str()
            << "]}\n";
        sink.write(doc.str());
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"relfacts: relative facts, stability and decoherence in small quantum "
                 "scenarios"};
    app.require_subcommand(1);

    bool list_json = false;
    auto *list = app.add_subcommand("list", "list built-in scenarios and their parameters");
    list->add_flag("--json", list_json, "machine-readable schema");

    RunOptions run_opts;
    auto *run = app.add_subcommand("run", "run a scenario's report plan");
    run->add_option("name", run_opts.name, "built-in scenario name");
    run->add_option("--config", run_opts.config, "scenario file (JSON)");
    run->add_option("--param", run_opts.params, "parameter override key=value")
        ->allow_extra_args(false);
    run->add_option("--tol", run_opts.tols, "tolerance override key=value")
        ->allow_extra_args(false);
    run->add_option("--format", run_opts.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--output", run_opts.output, "output path (default stdout)");
    run->add_option("--seed", run_opts.seed, "seed for random environment angles");
    run->add_flag("--emit-config", run_opts.emit_config,
                  "print the scenario as a JSON scenario file instead of running it");

    SweepOptions sweep_opts;
    auto *sweep = app.add_subcommand("sweep", "sweep one parameter of a built-in scenario");
    sweep->add_option("name", sweep_opts.name, "built-in scenario name")->required();
    sweep->add_option("--axis", sweep_opts.axis,
                      "k=start..stop,count | k=a..b (integers) | k=v1,v2,...")
        ->required();
    sweep->add_option("--param", sweep_opts.params, "fixed parameter key=value")
        ->allow_extra_args(false);
    sweep->add_option("--tol", sweep_opts.tols, "tolerance override key=value")
        ->allow_extra_args(false);
    sweep->add_option("--format", sweep_opts.format, "csv or json")
        ->check(CLI::IsMember({"json", "csv"}));
    sweep->add_option("--output", sweep_opts.output, "output path (default stdout)");
    sweep->add_option("--seed", sweep_opts.seed, "seed for random environment angles");
    sweep->add_option("--strict", sweep_opts.strict,
                      "abort on the first capacity error (default true)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        report_error(rf::ErrorCode::Usage, e.what());
        return static_cast<int>(rf::ErrorCode::Usage);
    }

    try {
        apply_dim_cap_env();
        if (*list) {
            cmd_list(list_json);
        } else if (*run) {
            cmd_run(run_opts);
        } else if (*sweep) {
            cmd_sweep(sweep_opts);
        }
    } catch (const rf::Error &e) {
        report_error(e.code(), e.what());
        return static_cast<int>(e.code());
    } catch (const std::bad_alloc &) {
        report_error(rf::ErrorCode::Capacity, "out of memory");
        return static_cast<int>(rf::ErrorCode::Capacity);
    } catch (const std::exception &e) {
        report_error(rf::ErrorCode::Numeric, e.what());
        return static_cast<int>(rf::ErrorCode::Numeric);
    }
    return 0;
}
