#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pairclass/corpus_index.hpp"
#include "pairclass/word_pair.hpp"

namespace pairclass {

// Irregular forms shipped with the library. One mapping per line,
// tab-separated: lemma, then its surface forms. A lemma listed alone keeps
// the suffix rules away from it.
inline const char* default_morph_rules() {
    return
        "pairclass-morph v1\n"
        "# verbs\n"
        "be\tam\tis\tare\twas\twere\tbeen\tbeing\n"
        "have\thas\thad\thaving\n"
        "do\tdoes\tdid\tdone\tdoing\n"
        "go\tgoes\twent\tgone\tgoing\n"
        "say\tsays\tsaid\tsaying\n"
        "get\tgets\tgot\tgotten\tgetting\n"
        "make\tmakes\tmade\tmaking\n"
        "know\tknows\tknew\tknown\tknowing\n"
        "think\tthinks\tthought\tthinking\n"
        "take\ttakes\ttook\ttaken\ttaking\n"
        "see\tsees\tsaw\tseen\tseeing\n"
        "come\tcomes\tcame\tcoming\n"
        "give\tgives\tgave\tgiven\tgiving\n"
        "find\tfinds\tfound\tfinding\n"
        "tell\ttells\ttold\ttelling\n"
        "become\tbecomes\tbecame\tbecoming\n"
        "show\tshows\tshowed\tshown\tshowing\n"
        "leave\tleaves\tleft\tleaving\n"
        "feel\tfeels\tfelt\tfeeling\n"
        "put\tputs\tputting\n"
        "bring\tbrings\tbrought\tbringing\n"
        "begin\tbegins\tbegan\tbegun\tbeginning\n"
        "keep\tkeeps\tkept\tkeeping\n"
        "hold\tholds\theld\tholding\n"
        "write\twrites\twrote\twritten\twriting\n"
        "stand\tstands\tstood\tstanding\n"
        "hear\thears\theard\thearing\n"
        "let\tlets\tletting\n"
        "mean\tmeans\tmeant\tmeaning\n"
        "set\tsets\tsetting\n"
        "meet\tmeets\tmet\tmeeting\n"
        "run\truns\tran\trunning\n"
        "pay\tpays\tpaid\tpaying\n"
        "sit\tsits\tsat\tsitting\n"
        "speak\tspeaks\tspoke\tspoken\tspeaking\n"
        "lie\tlies\tlay\tlain\tlying\n"
        "lead\tleads\tled\tleading\n"
        "read\treads\treading\n"
        "grow\tgrows\tgrew\tgrown\tgrowing\n"
        "lose\tloses\tlost\tlosing\n"
        "fall\tfalls\tfell\tfallen\tfalling\n"
        "send\tsends\tsent\tsending\n"
        "build\tbuilds\tbuilt\tbuilding\n"
        "understand\tunderstands\tunderstood\tunderstanding\n"
        "draw\tdraws\tdrew\tdrawn\tdrawing\n"
        "break\tbreaks\tbroke\tbroken\tbreaking\n"
        "spend\tspends\tspent\tspending\n"
        "cut\tcuts\tcutting\n"
        "rise\trises\trose\trisen\trising\n"
        "drive\tdrives\tdrove\tdriven\tdriving\n"
        "buy\tbuys\tbought\tbuying\n"
        "wear\twears\twore\tworn\twearing\n"
        "choose\tchooses\tchose\tchosen\tchoosing\n"
        "eat\teats\tate\teaten\teating\n"
        "fly\tflies\tflew\tflown\tflying\n"
        "fight\tfights\tfought\tfighting\n"
        "throw\tthrows\tthrew\tthrown\tthrowing\n"
        "catch\tcatches\tcaught\tcatching\n"
        "teach\tteaches\ttaught\tteaching\n"
        "sell\tsells\tsold\tselling\n"
        "sing\tsings\tsang\tsung\tsinging\n"
        "swim\tswims\tswam\tswum\tswimming\n"
        "sleep\tsleeps\tslept\tsleeping\n"
        "win\twins\twon\twinning\n"
        "forget\tforgets\tforgot\tforgotten\tforgetting\n"
        "ride\trides\trode\tridden\triding\n"
        "shake\tshakes\tshook\tshaken\tshaking\n"
        "steal\tsteals\tstole\tstolen\tstealing\n"
        "freeze\tfreezes\tfroze\tfrozen\tfreezing\n"
        "hide\thides\thid\thidden\thiding\n"
        "bite\tbites\tbit\tbitten\tbiting\n"
        "blow\tblows\tblew\tblown\tblowing\n"
        "hit\thits\thitting\n"
        "hurt\thurts\thurting\n"
        "shoot\tshoots\tshot\tshooting\n"
        "swear\tswears\tswore\tsworn\tswearing\n"
        "tear\ttears\ttore\ttorn\ttearing\n"
        "wake\twakes\twoke\twoken\twaking\n"
        "seek\tseeks\tsought\tseeking\n"
        "shine\tshines\tshone\tshining\n"
        "sink\tsinks\tsank\tsunk\tsinking\n"
        "spring\tsprings\tsprang\tsprung\tspringing\n"
        "strike\tstrikes\tstruck\tstriking\n"
        "deal\tdeals\tdealt\tdealing\n"
        "dig\tdigs\tdug\tdigging\n"
        "feed\tfeeds\tfed\tfeeding\n"
        "hang\thangs\thung\thanging\n"
        "bend\tbends\tbent\tbending\n"
        "burn\tburns\tburnt\tburning\n"
        "lend\tlends\tlent\tlending\n"
        "ring\trings\trang\trung\tringing\n"
        "shut\tshuts\tshutting\n"
        "slide\tslides\tslid\tsliding\n"
        "spread\tspreads\tspreading\n"
        "forgive\tforgives\tforgave\tforgiven\tforgiving\n"
        "beat\tbeats\tbeaten\tbeating\n"
        "bear\tbears\tbore\tborne\tbearing\n"
        "drink\tdrinks\tdrank\tdrunk\tdrinking\n"
        "cost\tcosts\tcosting\n"
        "# common e-final verbs the suffix rules would mangle\n"
        "use\tuses\tused\tusing\n"
        "change\tchanges\tchanged\tchanging\n"
        "charge\tcharges\tcharged\tcharging\n"
        "judge\tjudges\tjudged\tjudging\n"
        "manage\tmanages\tmanaged\tmanaging\n"
        "arrange\tarranges\tarranged\tarranging\n"
        "engage\tengages\tengaged\tengaging\n"
        "damage\tdamages\tdamaged\tdamaging\n"
        "imagine\timagines\timagined\timagining\n"
        "examine\texamines\texamined\texamining\n"
        "determine\tdetermines\tdetermined\tdetermining\n"
        "combine\tcombines\tcombined\tcombining\n"
        "define\tdefines\tdefined\tdefining\n"
        "decline\tdeclines\tdeclined\tdeclining\n"
        "# nouns with irregular plurals\n"
        "man\tmen\n"
        "woman\twomen\n"
        "child\tchildren\n"
        "foot\tfeet\n"
        "tooth\tteeth\n"
        "mouse\tmice\n"
        "goose\tgeese\n"
        "person\tpeople\n"
        "ox\toxen\n"
        "leaf\tleaves\n"
        "knife\tknives\n"
        "wife\twives\n"
        "life\tlives\n"
        "wolf\twolves\n"
        "half\thalves\n"
        "shelf\tshelves\n"
        "calf\tcalves\n"
        "loaf\tloaves\n"
        "thief\tthieves\n"
        "datum\tdata\n"
        "medium\tmedia\n"
        "criterion\tcriteria\n"
        "phenomenon\tphenomena\n"
        "analysis\tanalyses\n"
        "basis\tbases\n"
        "crisis\tcrises\n"
        "thesis\ttheses\n"
        "hypothesis\thypotheses\n"
        "axis\taxes\n"
        "series\n"
        "species\n"
        "# words the suffix rules should leave alone\n"
        "thing\tthings\n"
        "king\tkings\n"
        "wing\twings\n"
        "string\tstrings\n"
        "morning\tmornings\n"
        "evening\tevenings\n"
        "nothing\n"
        "something\n"
        "anything\n"
        "everything\n"
        "during\n"
        "news\n"
        "always\n"
        "perhaps\n"
        "its\n"
        "this\n"
        "these\tthis\n";
}

class MorphRules {
public:
    static MorphRules builtin() { return MorphRules(default_morph_rules(), "<builtin>"); }

    static MorphRules from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read morph rules file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return MorphRules(buf.str(), path);
    }

    std::size_t variant_cap() const { return cap_; }

    // Word plus rule-generated inflections, capped. When an index is given,
    // generated forms absent from the corpus are dropped (the word itself
    // always stays).
    std::vector<std::string> variants(const std::string& word,
                                      const CorpusIndex* index = nullptr) const {
        std::vector<std::string> out;
        auto add = [&](const std::string& w) {
            if (w.empty() || out.size() >= cap_) return;
            if (std::find(out.begin(), out.end(), w) != out.end()) return;
            if (index && w != word && !index->contains(w)) return;
            out.push_back(w);
        };
        add(word);
        auto lex = lemmaOf_.find(word);
        if (lex != lemmaOf_.end()) {
            // irregular: the lemma's whole form set
            add(lex->second);
            auto fit = formsOf_.find(lex->second);
            if (fit != formsOf_.end())
                for (const auto& f : fit->second) add(f);
            return out;
        }
        add(lemmatize(word));
        for (const auto& f : regular_inflections(word)) add(f);
        return out;
    }

    // Fixed point of the single-step rules, so lemmatize is idempotent
    // (e.g. founded -> found -> find).
    std::string lemmatize(const std::string& word) const {
        std::string cur = word;
        for (int i = 0; i < 5; ++i) {
            std::string next = lemmatize_step(cur);
            if (next == cur) break;
            cur = std::move(next);
        }
        return cur;
    }

private:
    std::string lemmatize_step(const std::string& w) const {
        auto it = lemmaOf_.find(w);
        if (it != lemmaOf_.end()) return it->second;
        if (w.size() < 3) return w;

        auto ends = [&](const char* suf) {
            std::string_view s(suf);
            return w.size() >= s.size() && w.compare(w.size() - s.size(), s.size(), s) == 0;
        };
        auto has_vowel = [](std::string_view s) {
            return s.find_first_of("aeiouy") != std::string_view::npos;
        };

        if (ends("ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
        if (ends("sses") || ends("xes") || ends("zes") || ends("ches") || ends("shes"))
            return w.substr(0, w.size() - 2);
        if (w.back() == 's' && !ends("ss") && !ends("us") && !ends("is") && w.size() > 3)
            return w.substr(0, w.size() - 1);
        if (ends("ied") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
        if (ends("ed") && !ends("eed") && w.size() > 4) {
            std::string stem = w.substr(0, w.size() - 2);
            return fix_stem(std::move(stem));
        }
        if (ends("ing") && w.size() > 5) {
            std::string stem = w.substr(0, w.size() - 3);
            if (!has_vowel(stem)) return w;
            return fix_stem(std::move(stem));
        }
        return w;
    }

public:
    Phrase normalize_phrase(const RawWindow& window) const {
        Phrase p;
        p.tokens.reserve(window.tokens.size());
        for (const auto& t : window.tokens) p.tokens.push_back(lemmatize(t));
        p.xPos = window.xPos;
        p.yPos = window.yPos;
        return p;
    }

private:
    MorphRules(const std::string& text, const std::string& origin) {
        std::istringstream in(text);
        std::string line;
        if (!std::getline(in, line) || line.rfind("pairclass-morph", 0) != 0)
            throw std::runtime_error("morph rules missing version header: " + origin);
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string lemma, form;
            std::getline(ls, lemma, '\t');
            lemmaOf_[lemma] = lemma;
            auto& forms = formsOf_[lemma];
            while (std::getline(ls, form, '\t')) {
                if (form.empty()) continue;
                forms.push_back(form);
                lemmaOf_.emplace(form, lemma);  // first mapping wins
            }
        }
    }

    // Undo consonant doubling and restore a dropped final e where the stem
    // demands it (caus -> cause, lov -> love).
    static std::string fix_stem(std::string stem) {
        auto is_vowel = [](char c) {
            return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
        };
        std::size_t n = stem.size();
        if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
            stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'f' &&
            stem[n - 1] != 'z') {
            stem.pop_back();
            return stem;
        }
        char last = stem[n - 1];
        if (last == 'v' || last == 'c' || last == 'u' ||
            (last == 's' && n >= 2 && is_vowel(stem[n - 2])))
            stem.push_back('e');
        return stem;
    }

    // Plural / 3sg, past, and -ing forms by rule. No consonant doubling on
    // generation; doubled irregulars live in the exception table.
    static std::vector<std::string> regular_inflections(const std::string& w) {
        auto ends = [&](const char* suf) {
            std::string_view s(suf);
            return w.size() >= s.size() && w.compare(w.size() - s.size(), s.size(), s) == 0;
        };
        auto is_vowel = [](char c) {
            return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
        };
        std::vector<std::string> out;
        std::string sForm;
        if (ends("s") || ends("x") || ends("z") || ends("ch") || ends("sh"))
            sForm = w + "es";
        else if (w.size() >= 2 && w.back() == 'y' && !is_vowel(w[w.size() - 2]))
            sForm = w.substr(0, w.size() - 1) + "ies";
        else
            sForm = w + "s";
        out.push_back(sForm);
        std::string past, ing;
        if (w.size() >= 2 && w.back() == 'y' && !is_vowel(w[w.size() - 2])) {
            past = w.substr(0, w.size() - 1) + "ied";
            ing = w + "ing";
        } else if (w.back() == 'e') {
            past = w + "d";
            ing = w.substr(0, w.size() - 1) + "ing";
        } else {
            past = w + "ed";
            ing = w + "ing";
        }
        out.push_back(past);
        out.push_back(ing);
        return out;
    }

    std::unordered_map<std::string, std::string> lemmaOf_;
    std::unordered_map<std::string, std::vector<std::string>> formsOf_;
    std::size_t cap_ = 8;
};

} // namespace pairclass
