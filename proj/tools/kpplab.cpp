// Command line front end.  Every run reads a JSON config, the subcommand
// selects (and may override) the run kind, and results land in a run
// directory with config.json first and run_record.json last.
#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "kpplab/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read config file " + path);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

struct Overrides {
    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int threads = -1;
    std::vector<double> snapshots;
    bool has_snapshots = false;
};

int run_kind(const std::string& kind, const Overrides& ov) {
    kpplab::RunConfig cfg;
    std::string dir = ov.out;  // best-known place for error.json before parsing
    try {
        cfg = kpplab::parse_config(slurp(ov.config_path));
        if (!kind.empty()) cfg.kind = kind;
        if (ov.has_seed) cfg.seed = ov.seed;
        if (!ov.out.empty()) cfg.out = ov.out;
        if (ov.threads >= 0) cfg.threads = ov.threads;
        if (ov.has_snapshots) cfg.simulate.snapshots = ov.snapshots;
        dir = kpplab::run_directory(cfg);
        kpplab::RunRecord rec = kpplab::run(cfg);
        return rec.ok ? 0 : 1;
    } catch (const kpplab::ConfigError& e) {
        if (!dir.empty()) kpplab::write_error_file(dir, "config", e.what());
        std::fprintf(stderr, "config error: %s\n", e.what());
    } catch (const kpplab::DomainTooSmall& e) {
        if (!dir.empty()) kpplab::write_error_file(dir, "domain", e.what());
        std::fprintf(stderr, "domain error: %s\n", e.what());
    } catch (const kpplab::SolverError& e) {
        if (!dir.empty()) kpplab::write_error_file(dir, "solver", e.what());
        std::fprintf(stderr, "solver error: %s\n", e.what());
    } catch (const std::exception& e) {
        if (!dir.empty()) kpplab::write_error_file(dir, "internal", e.what());
        std::fprintf(stderr, "error: %s\n", e.what());
    }
    return 1;
}

int run_list(const std::string& root) {
    std::string r = root.empty() ? kpplab::output_root() : root;
    auto entries = kpplab::registry_list(r);
    if (entries.empty()) {
        std::printf("no runs under %s\n", r.c_str());
        return 0;
    }
    for (const auto& e : entries) {
        if (e.complete) {
            std::printf("%-40s %-11s %s seed %llu%s\n", e.dir.c_str(), e.record.kind.c_str(),
                        e.record.config_hash.c_str(),
                        static_cast<unsigned long long>(e.record.seed),
                        e.record.ok ? "" : "  [failed]");
        } else {
            std::printf("%-40s PARTIAL: %s\n", e.dir.c_str(), e.note.c_str());
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kpplab: reaction-diffusion front experiments"};
    app.require_subcommand(1);

    Overrides ov;
    std::string list_root;
    const char* kinds[] = {"validate", "simulate", "speed", "wulff", "vlin", "homogenize"};
    std::vector<CLI::App*> subs;
    for (const char* k : kinds) {
        CLI::App* s = app.add_subcommand(k, std::string("run a ") + k + " config");
        s->add_option("-c,--config", ov.config_path, "JSON config file")->required();
        s->add_option("-o,--out", ov.out, "output directory (default runs/<kind>-<hash>)");
        s->add_option("-s,--seed", ov.seed, "override the config seed")
            ->each([&](const std::string&) { ov.has_seed = true; });
        s->add_option("-t,--threads", ov.threads, "OpenMP thread count (0 = library default)");
        if (std::string(k) == "simulate") {
            s->add_option("--emit-snapshots", ov.snapshots, "snapshot times to record")
                ->each([&](const std::string&) { ov.has_snapshots = true; });
        }
        subs.push_back(s);
    }
    CLI::App* list = app.add_subcommand("list", "list run directories under the output root");
    list->add_option("root", list_root, "registry root (default $KPPLAB_OUT or runs)");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) return run_list(list_root);
    for (size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) return run_kind(kinds[i], ov);
    }
    return 1;
}
