#include "slads/model.hpp"

#include "slads/text.hpp"

#include <cmath>
#include <fstream>
#include <map>

namespace slads {

std::string rd_kind_name(const RdKind& kind) {
    return kind.approximate ? "approximate" : "exact";
}

void save_model(const RegressionModel& model, const std::filesystem::path& path) {
    {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write model file: " + path.string());
        for (double v : model.theta) {
            if (!std::isfinite(v))
                throw ContractError("save_model: non-finite coefficient");
            out << fmt_double(v) << "\n";
        }
    }
    std::ofstream meta(path.string() + ".meta");
    if (!meta) throw IoError("cannot write model metadata: " + path.string() + ".meta");
    meta << "mode=" << mode_name(model.mode) << "\n";
    meta << "rd_kind=" << rd_kind_name(model.rd_kind) << "\n";
    if (model.rd_kind.approximate) meta << "c=" << fmt_double(model.rd_kind.c) << "\n";
    meta << "neighbor_count=" << model.descriptor.neighbor_count << "\n";
    meta << "lambda=" << fmt_double(model.descriptor.lambda) << "\n";
    meta << "corpus_id=" << model.corpus_id << "\n";
}

RegressionModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read model file: " + path.string());
    RegressionModel model;
    std::string line;
    size_t n = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        if (n >= model.theta.size())
            throw ContractError("model file has more than " +
                                std::to_string(model.theta.size()) + " coefficients");
        try {
            model.theta[n] = std::stod(trim(line));
        } catch (const std::exception&) {
            throw ContractError("model file: bad coefficient '" + line + "'");
        }
        if (!std::isfinite(model.theta[n]))
            throw ContractError("model file: non-finite coefficient");
        ++n;
    }
    if (n != model.theta.size())
        throw ContractError("model file has " + std::to_string(n) + " coefficients, expected " +
                            std::to_string(model.theta.size()));

    std::ifstream meta(path.string() + ".meta");
    if (!meta) throw IoError("cannot read model metadata: " + path.string() + ".meta");
    std::map<std::string, std::string> kv;
    while (std::getline(meta, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ContractError("model metadata: malformed line '" + t + "'");
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    auto need = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end())
            throw ContractError("model metadata: missing key '" + key + "'");
        return it->second;
    };
    model.mode = mode_from_name(need("mode"));
    const std::string kind = need("rd_kind");
    if (kind == "approximate") {
        model.rd_kind.approximate = true;
        model.rd_kind.c = std::stod(need("c"));
    } else if (kind == "exact") {
        model.rd_kind.approximate = false;
    } else {
        throw ContractError("model metadata: unknown rd_kind '" + kind + "'");
    }
    model.descriptor.neighbor_count = std::stoi(need("neighbor_count"));
    model.descriptor.lambda = std::stod(need("lambda"));
    if (auto it = kv.find("corpus_id"); it != kv.end()) model.corpus_id = it->second;
    return model;
}

} // namespace slads
