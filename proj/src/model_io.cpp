#include "smdplab/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace smdplab {

namespace {

void fail(const std::string& what, int line_no) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "model file: %s (line %d)", what.c_str(), line_no);
    throw std::invalid_argument(buf);
}

std::string fmt_real(Real x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void save_model(std::ostream& out, const FhMdp& mdp, const OptionSet& options) {
    out << "smdplab-model 1\n";
    out << "mdp " << mdp.num_states() << ' ' << mdp.num_actions() << ' ' << mdp.horizon() << ' '
        << mdp.start_state() << '\n';
    for (int h = 1; h < mdp.horizon(); ++h)
        for (int a = 0; a < mdp.num_actions(); ++a)
            for (int s = 0; s < mdp.num_states(); ++s)
                for (int sp = 0; sp < mdp.num_states(); ++sp) {
                    const Real p = mdp.transition(s, a, h, sp);
                    if (p != 0.0)
                        out << "transition " << s << ' ' << a << ' ' << h << ' ' << sp << ' '
                            << fmt_real(p) << '\n';
                }
    for (int h = 1; h < mdp.horizon(); ++h)
        for (int a = 0; a < mdp.num_actions(); ++a)
            for (int s = 0; s < mdp.num_states(); ++s) {
                const Real r = mdp.reward_mean(s, a, h);
                const RewardKind kind = mdp.reward_kind(s, a, h);
                if (r != 0.0 || kind != RewardKind::Deterministic)
                    out << "reward " << s << ' ' << a << ' ' << h << ' ' << fmt_real(r) << ' '
                        << (kind == RewardKind::Bernoulli ? "bern" : "det") << '\n';
            }
    for (int o = 0; o < options.size(); ++o) {
        const OptionSpec& opt = options[o];
        out << "option " << opt.id << '\n';
        for (int h = 1; h <= mdp.horizon(); ++h)
            for (int s = 0; s < mdp.num_states(); ++s) {
                if (h < mdp.horizon() && opt.initiable(s, h))
                    out << "init " << s << ' ' << h << '\n';
                if (opt.beta(s, h) != 0.0)
                    out << "term " << s << ' ' << h << ' ' << fmt_real(opt.beta(s, h)) << '\n';
                if (opt.action(s, h) >= 0)
                    out << "act " << s << ' ' << h << ' ' << opt.action(s, h) << '\n';
            }
    }
    out << "end\n";
}

Environment load_model(std::istream& in) {
    Environment env;
    bool have_mdp = false;
    OptionSpec* current = nullptr;
    std::string line;
    int line_no = 0;
    bool ended = false;

    std::string header;
    int version = 0;
    in >> header >> version;
    ++line_no;
    if (header != "smdplab-model" || version != 1) fail("unknown header", line_no);
    std::getline(in, line);

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string kind;
        row >> kind;
        if (kind == "end") {
            ended = true;
            break;
        }
        if (kind == "mdp") {
            int S = 0, A = 0, H = 0, start = 0;
            if (!(row >> S >> A >> H >> start)) fail("malformed mdp line", line_no);
            if (S < 1 || A < 1 || H < 2) fail("mdp dimensions out of range", line_no);
            env.mdp = FhMdp(S, A, H);
            if (start < 0 || start >= S) fail("start state out of range", line_no);
            env.mdp.set_start_state(start);
            have_mdp = true;
            continue;
        }
        if (!have_mdp) fail("directive before the mdp line", line_no);
        const int S = env.mdp.num_states();
        const int A = env.mdp.num_actions();
        const int H = env.mdp.horizon();
        if (kind == "transition") {
            int s, a, h, sp;
            Real p;
            if (!(row >> s >> a >> h >> sp >> p)) fail("malformed transition", line_no);
            if (s < 0 || s >= S || sp < 0 || sp >= S || a < 0 || a >= A || h < 1 || h >= H)
                fail("transition index out of range", line_no);
            env.mdp.transition_matrix(a, h)(s, sp) = p;
        } else if (kind == "reward") {
            int s, a, h;
            Real mean;
            std::string tag;
            if (!(row >> s >> a >> h >> mean >> tag)) fail("malformed reward", line_no);
            if (s < 0 || s >= S || a < 0 || a >= A || h < 1 || h >= H)
                fail("reward index out of range", line_no);
            if (tag != "det" && tag != "bern") fail("unknown reward kind", line_no);
            env.mdp.set_reward(s, a, h, mean,
                               tag == "bern" ? RewardKind::Bernoulli
                                             : RewardKind::Deterministic);
        } else if (kind == "option") {
            std::string id;
            if (!(row >> id)) fail("option without an id", line_no);
            env.options.options.emplace_back(id, S, H);
            current = &env.options.options.back();
        } else if (kind == "init" || kind == "term" || kind == "act") {
            if (!current) fail("option directive outside an option block", line_no);
            int s, h;
            if (!(row >> s >> h)) fail("malformed option entry", line_no);
            if (s < 0 || s >= S || h < 1 || h > H) fail("option index out of range", line_no);
            if (kind == "init") {
                if (h >= H) fail("initiation at the horizon", line_no);
                current->set_initiable(s, h);
            } else if (kind == "term") {
                Real b;
                if (!(row >> b)) fail("malformed termination entry", line_no);
                current->set_beta(s, h, b);
            } else {
                int a;
                if (!(row >> a)) fail("malformed action entry", line_no);
                if (a < 0 || a >= A) fail("option action out of range", line_no);
                current->set_action(s, h, a);
            }
        } else {
            fail("unknown directive '" + kind + "'", line_no);
        }
    }
    if (!have_mdp) fail("missing mdp line", line_no);
    if (!ended) fail("missing end line", line_no);
    return env;
}

void save_model_file(const std::string& path, const FhMdp& mdp, const OptionSet& options) {
    std::ofstream out(path);
    require(out.good(), "cannot open model file for writing: " + path);
    save_model(out, mdp, options);
}

Environment load_model_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open model file: " + path);
    return load_model(in);
}

}  // namespace smdplab
