#ifndef BOSEGAS_HARNESS_HPP
#define BOSEGAS_HARNESS_HPP

#include "bosegas/config.hpp"
#include "bosegas/grid.hpp"
#include "bosegas/io.hpp"
#include "bosegas/rng.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <type_traits>
#include <vector>

namespace bosegas::harness {

// Ensemble sizes and solver tolerances bundled behind a named profile so a
// quick desk run and a publication-grade run differ by one flag.
struct Tolerances {
    std::string name = "desk";
    double eigen_tol = 1e-9;
    double gpe_tol = 1e-9;
    int dos_realizations = 2000;
    int correlator_realizations = 200;
    int fragment_seeds = 20;
    int bootstrap = 48;

    static Tolerances desk();
    static Tolerances strict();
    static Tolerances named(const std::string& name); // throws ValidationError
};

struct RunOptions {
    std::filesystem::path out_root = "out";
    std::string run_id;  // empty: "<command>-s<master seed>"
    Seed seed{1, 0};
    bool seed_given = false; // command line beats the config "seed" entry
    int threads = 0;         // 0: config "threads", else 1
    std::string tolerance_profile;
};

struct TaskRecord {
    std::string name;
    std::string status; // "ok" | "failed: <why>"
    double wall_seconds = 0.0;
};

// Owns the out/<run-id>/ tree for one command invocation. Artifacts and task
// outcomes accumulate during the run; finalize() writes manifest.json last
// and atomically, so a manifest's presence certifies a complete directory.
class RunSession {
public:
    RunSession(std::string command, Config config, RunOptions options);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path tables_dir() const { return dir_ / "tables"; }
    std::filesystem::path fields_dir() const { return dir_ / "fields"; }

    const std::string& command() const { return command_; }
    const Config& config() const { return config_; }
    const RunOptions& options() const { return options_; }
    const Tolerances& tolerances() const { return tolerances_; }
    Seed seed() const { return seed_; }
    int threads() const { return threads_; }

    void record_artifact(const std::filesystem::path& path); // absolute or run-relative
    void record_task(const std::string& name, const std::string& status, double seconds);

    // Runs fn under wall-clock accounting; failures are recorded, then rethrown.
    template <typename Fn>
    auto task(const std::string& name, Fn&& fn) {
        const auto t0 = clock_now();
        try {
            if constexpr (std::is_void_v<decltype(fn())>) {
                fn();
                record_task(name, "ok", seconds_since(t0));
            } else {
                auto result = fn();
                record_task(name, "ok", seconds_since(t0));
                return result;
            }
        } catch (const std::exception& e) {
            record_task(name, std::string("failed: ") + e.what(), seconds_since(t0));
            throw;
        }
    }

    void save_field(const Field& field, const std::string& name, const io::FieldMeta& meta);
    void write_report(const nlohmann::json& report);
    void finalize(const std::string& status);
    bool finalized() const { return finalized_; }

private:
    static double clock_now();
    static double seconds_since(double t0);

    std::string command_;
    Config config_;
    RunOptions options_;
    Tolerances tolerances_;
    Seed seed_;
    int threads_ = 1;
    std::filesystem::path dir_;
    std::vector<std::string> artifacts_;
    std::vector<TaskRecord> tasks_;
    double started_ = 0.0;
    bool finalized_ = false;
};

// Command bodies. Each writes its tables/fields plus report.json and returns
// the report. The session owns layout and bookkeeping.
nlohmann::json run_predict(RunSession& session);
nlohmann::json run_generate(RunSession& session);
nlohmann::json run_spectrum(RunSession& session);
nlohmann::json run_gpe(RunSession& session);
nlohmann::json run_fragments(RunSession& session);
nlohmann::json run_verify(RunSession& session, const std::string& experiment);
nlohmann::json run_sweep(RunSession& session);

// Maps a command name to its body, finalizes the session, and translates
// outcomes to process exit codes: 0 success, 1 invalid input, 2 numerical
// failure, 3 a verification experiment ran fine but its verdict is FAIL.
int dispatch(const std::string& command, Config config, RunOptions options,
             const std::string& verify_experiment = "");

nlohmann::json warnings_json(const Warnings& warnings);

} // namespace bosegas::harness

#endif
