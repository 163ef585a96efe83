#include "experiment.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "planshield/task_json.hpp"

namespace planshield::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

EnumerationConfig variant_config(const std::string& variant) {
    EnumerationConfig config;
    if (variant != "all") {
        const int k = std::stoi(variant);
        if (k < 1) throw Error("variant must be 'all' or a positive integer");
        config.top_k = k;
    }
    return config;
}

ExperimentRow run_row(const ExperimentInstance& inst, const std::string& variant,
                      double time_limit_s) {
    ExperimentRow row;
    row.domain = inst.domain;
    row.instance = inst.instance;
    row.variant = variant;

    try {
        PlanningTask task;
        if (inst.task_path)
            task = parse_task_json(read_file(*inst.task_path));
        else if (inst.bench_config)
            task = generate(*inst.bench_config).task;
        else
            throw Error("instance '" + inst.instance + "' has neither a task file nor a generator");

        Budgets budgets;
        budgets.time_limit_s = time_limit_s;
        const ShieldReport report = shield(task, variant_config(variant), budgets);
        row.solved = true;
        row.time_total_s = report.timings.total_s;
        row.time_enum_s = report.timings.enum_s;
        row.time_ilp_s = report.timings.ilp_s;
        row.time_verify_s = report.timings.verify_s;
        row.num_mods = report.modifications.cardinality();
        row.success = report.success ? 1 : 0;
    } catch (const std::exception& e) {
        row.solved = false;
        row.error = e.what();
    }
    return row;
}

}  // namespace

ExperimentSuite load_suite(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error("suite file '" + path + "': " + e.what());
    }

    ExperimentSuite suite;
    suite.time_limit_s = j.value("time_limit_s", 1800.0);
    suite.jobs = j.value("jobs", 1);
    if (!j.contains("variants") || !j["variants"].is_array())
        throw Error("suite file: missing \"variants\" array");
    for (const auto& v : j["variants"])
        suite.variants.push_back(v.is_string() ? v.get<std::string>()
                                               : std::to_string(v.get<int>()));

    if (!j.contains("instances") || !j["instances"].is_array())
        throw Error("suite file: missing \"instances\" array");
    for (const auto& item : j["instances"]) {
        ExperimentInstance inst;
        inst.domain = item.value("domain", "task");
        inst.instance = item.value("id", std::to_string(suite.instances.size()));
        if (item.contains("task")) {
            inst.task_path = item["task"].get<std::string>();
        } else if (item.contains("benchgen")) {
            const auto& b = item["benchgen"];
            BenchConfig config;
            config.num_plans = b.value("plans", 8);
            config.min_len = b.value("min_len", 2);
            config.max_len = b.value("max_len", 4);
            config.share_fraction = b.value("share", 0.4);
            config.seed = b.value("seed", std::uint64_t{0});
            inst.bench_config = config;
        } else {
            throw Error("suite instance '" + inst.instance + "': need \"task\" or \"benchgen\"");
        }
        suite.instances.push_back(std::move(inst));
    }
    return suite;
}

std::vector<ExperimentRow> run_suite(const ExperimentSuite& suite) {
    struct Cell {
        const ExperimentInstance* instance;
        const std::string* variant;
    };
    std::vector<Cell> grid;
    for (const auto& inst : suite.instances)
        for (const auto& variant : suite.variants) grid.push_back({&inst, &variant});

    std::vector<ExperimentRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    const int jobs = std::max(1, suite.jobs);

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            rows[i] = run_row(*grid[i].instance, *grid[i].variant, suite.time_limit_s);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream os;
    os << "domain,instance,variant,solved,time_total_s,time_enum_s,time_ilp_s,time_verify_s,"
          "num_mods,success\n";
    for (const ExperimentRow& r : rows) {
        os << r.domain << ',' << r.instance << ',' << r.variant << ',' << (r.solved ? 1 : 0) << ','
           << r.time_total_s << ',' << r.time_enum_s << ',' << r.time_ilp_s << ','
           << r.time_verify_s << ',';
        if (r.num_mods) os << *r.num_mods;
        os << ',';
        if (r.success) os << *r.success;
        os << '\n';
    }
    return os.str();
}

std::string summarize(const std::vector<ExperimentRow>& rows) {
    struct Acc {
        int total = 0;
        int solved = 0;
        int success = 0;
        std::vector<double> times;
        std::vector<double> mods;
    };
    std::map<std::pair<std::string, std::string>, Acc> cells;
    for (const ExperimentRow& r : rows) {
        Acc& acc = cells[{r.domain, r.variant}];
        ++acc.total;
        if (!r.solved) continue;
        ++acc.solved;
        acc.success += r.success.value_or(0);
        acc.times.push_back(r.time_total_s);
        if (r.num_mods) acc.mods.push_back(static_cast<double>(*r.num_mods));
    }

    auto mean_std = [](const std::vector<double>& xs) -> std::pair<double, double> {
        if (xs.empty()) return {0.0, 0.0};
        double mean = 0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= static_cast<double>(xs.size());
        return {mean, std::sqrt(var)};
    };

    std::ostringstream os;
    os << "domain,variant,#solved,time_mean_s,time_std_s,num_mods_mean,num_mods_std,success\n";
    for (const auto& [key, acc] : cells) {
        const auto [tm, ts] = mean_std(acc.times);
        const auto [mm, ms] = mean_std(acc.mods);
        os << key.first << ',' << key.second << ',' << acc.solved << '/' << acc.total << ',' << tm
           << ',' << ts << ',' << mm << ',' << ms << ',' << acc.success << '/' << acc.total << '\n';
    }
    return os.str();
}

}  // namespace planshield::cli
