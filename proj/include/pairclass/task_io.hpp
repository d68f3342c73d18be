#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pairclass/tasks.hpp"

namespace pairclass {

inline const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names = {
        "sat", "toefl", "esl", "esl-syn-ant", "cl-syn-ant", "sim-assoc-both",
        "noun-modifier"};
    return names;
}

inline bool is_choice_task(const std::string& name) {
    return name == "sat" || name == "toefl" || name == "esl";
}

struct TaskData {
    std::string name;
    std::vector<ChoiceQuestion> questions;  // choice tasks
    std::vector<WordPair> pairs;            // labeled-pair tasks
};

class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& origin, std::size_t line, const std::string& what)
        : std::runtime_error(origin + ":" + std::to_string(line) + ": " + what) {}
};

// Line-delimited task files:
//
//   pairclass-task <name> v1
//   Q <stem> | <choice> <choice> ... | <answer-index>     (choice tasks)
//   P <a>:<b> <label>                                     (labeled-pair tasks)
//
// Stems and choices are a:b pairs for sat, single words for toefl/esl.
inline TaskData parse_task(std::istream& in, const std::string& origin = "<stream>") {
    TaskData data;
    std::string line;
    std::size_t lineNo = 1;
    if (!std::getline(in, line))
        throw SchemaError(origin, lineNo, "empty task file");
    {
        std::istringstream hs(line);
        std::string magic, version;
        if (!(hs >> magic >> data.name >> version) || magic != "pairclass-task" ||
            version != "v1")
            throw SchemaError(origin, lineNo, "expected header 'pairclass-task <name> v1'");
        const auto& names = task_names();
        if (std::find(names.begin(), names.end(), data.name) == names.end())
            throw SchemaError(origin, lineNo, "unknown task name '" + data.name + "'");
    }
    bool choice = is_choice_task(data.name);
    auto split_pair = [&](const std::string& s, std::size_t ln) {
        auto colon = s.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == s.size())
            throw SchemaError(origin, ln, "expected a:b pair, got '" + s + "'");
        return std::make_pair(s.substr(0, colon), s.substr(colon + 1));
    };
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("Q ", 0) == 0) {
            if (!choice)
                throw SchemaError(origin, lineNo, "Q record in a labeled-pair task");
            std::string rest = line.substr(2);
            auto bar1 = rest.find('|');
            auto bar2 = rest.rfind('|');
            if (bar1 == std::string::npos || bar2 == bar1)
                throw SchemaError(origin, lineNo, "expected 'Q stem | choices | answer'");
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t");
                auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            ChoiceQuestion q;
            std::string stem = trim(rest.substr(0, bar1));
            if (data.name == "sat") {
                auto [a, b] = split_pair(stem, lineNo);
                q.stemA = a;
                q.stemB = b;
            } else {
                if (stem.find(':') != std::string::npos || stem.empty())
                    throw SchemaError(origin, lineNo, "expected single-word stem");
                q.stemA = stem;
            }
            std::istringstream cs(trim(rest.substr(bar1 + 1, bar2 - bar1 - 1)));
            std::string tok;
            while (cs >> tok) {
                ChoiceQuestion::Choice c;
                if (data.name == "sat") {
                    auto [a, b] = split_pair(tok, lineNo);
                    c.a = a;
                    c.b = b;
                } else {
                    if (tok.find(':') != std::string::npos)
                        throw SchemaError(origin, lineNo, "expected single-word choice");
                    c.a = tok;
                }
                q.choices.push_back(std::move(c));
            }
            std::string ans = trim(rest.substr(bar2 + 1));
            try {
                q.answerIndex = std::stoull(ans);
            } catch (const std::exception&) {
                throw SchemaError(origin, lineNo, "bad answer index '" + ans + "'");
            }
            try {
                q.validate();
            } catch (const std::exception& e) {
                throw SchemaError(origin, lineNo, e.what());
            }
            data.questions.push_back(std::move(q));
        } else if (line.rfind("P ", 0) == 0) {
            if (choice)
                throw SchemaError(origin, lineNo, "P record in a choice task");
            std::istringstream ps(line.substr(2));
            std::string pairStr, label;
            if (!(ps >> pairStr >> label))
                throw SchemaError(origin, lineNo, "expected 'P a:b label'");
            auto [a, b] = split_pair(pairStr, lineNo);
            try {
                data.pairs.emplace_back(a, b, label);
            } catch (const std::exception& e) {
                throw SchemaError(origin, lineNo, e.what());
            }
        } else {
            throw SchemaError(origin, lineNo, "unknown record '" + line.substr(0, 1) + "'");
        }
    }
    if (choice && data.questions.empty())
        throw SchemaError(origin, lineNo, "no questions in task file");
    if (!choice && data.pairs.empty())
        throw SchemaError(origin, lineNo, "no pairs in task file");
    return data;
}

inline TaskData parse_task_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open task file: " + path);
    return parse_task(in, path);
}

// ---- reports --------------------------------------------------------------

inline nlohmann::json eval_to_json(const std::string& task, const EvalResult& ev,
                                   std::uint64_t seed) {
    nlohmann::json j;
    j["task"] = task;
    j["seed"] = seed;
    j["accuracy"] = ev.accuracy;
    j["baseline"] = ev.baseline;
    j["fold_fallback"] = ev.foldFallback;
    j["items"] = nlohmann::json::array();
    for (const auto& it : ev.perItem) {
        nlohmann::json ji;
        ji["id"] = it.id;
        ji["predicted"] = it.predicted;
        ji["gold"] = it.gold;
        ji["correct"] = it.correct;
        ji["probabilities"] = it.probabilities;
        j["items"].push_back(std::move(ji));
    }
    return j;
}

inline void write_report(std::ostream& out, const std::string& task, const EvalResult& ev,
                         std::uint64_t seed) {
    out << "task: " << task << "  (seed " << seed << ")\n";
    out << std::fixed << std::setprecision(4);
    out << "accuracy: " << ev.accuracy << "  baseline: " << ev.baseline << "\n";
    if (ev.foldFallback) out << "note: fold-merge fallback engaged\n";
    out << "----------------------------------------------------------------\n";
    for (const auto& it : ev.perItem) {
        out << (it.correct ? "  ok   " : "  MISS ") << std::left << std::setw(32) << it.id
            << std::right << " predicted=" << it.predicted << " gold=" << it.gold << "\n";
    }
}

} // namespace pairclass
