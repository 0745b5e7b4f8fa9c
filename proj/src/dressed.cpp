#include "qdint/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qdint {

namespace {

const double kSqrt2 = std::sqrt(2.0);

Vec3 scaled(const Vec3& v, double s)
{
    return {s * v[0], s * v[1], s * v[2]};
}

// Decay-weighted transition rate: the jump amplitude sums the channels with
// weights sqrt(Gamma_n)/|mu_n|, which reduces to Gamma_n |m|^2 / |mu_n|^2 for
// a single-channel moment and satisfies the emission sum rule in general.
double weighted_rate(const Vec3& mu1, const Vec3& mu2, double g1, double g2, cplx amp1,
                     cplx amp2)
{
    const double n1 = norm(mu1), n2 = norm(mu2);
    cplx acc[3] = {0.0, 0.0, 0.0};
    if (n1 > 0.0)
        for (int k = 0; k < 3; ++k)
            acc[k] += std::sqrt(g1) / n1 * amp1 * mu1[k];
    if (n2 > 0.0)
        for (int k = 0; k < 3; ++k)
            acc[k] += std::sqrt(g2) / n2 * amp2 * mu2[k];
    double r = 0.0;
    for (const cplx& z : acc)
        r += std::norm(z);
    return r;
}

std::string with_manifold(const std::string& state, const char* n)
{
    return state + "," + n;
}

} // namespace

std::pair<Vec3, Vec3> microwave_superposition(const Vec3& mu12, const Vec3& mu32)
{
    const double inv = 1.0 / kSqrt2;
    return {scaled(mu12 + mu32, inv), scaled(mu12 - mu32, inv)};
}

LambdaDressing lambda_to_v_dressing(double rabi0, double delta_l, const Vec3& mu13)
{
    if (!(rabi0 > 0.0))
        throw ValidationError("lambda_to_v_dressing needs a positive Rabi frequency");
    LambdaDressing d{};
    d.splitting = std::sqrt(rabi0 * rabi0 + delta_l * delta_l);
    d.cos2_phi = 0.5 + 0.5 * delta_l / d.splitting;
    const double cphi = std::sqrt(d.cos2_phi);
    const double sphi = std::sqrt(1.0 - d.cos2_phi);
    d.mu_a1 = scaled(mu13, sphi);
    d.mu_b1 = scaled(mu13, cphi);
    return d;
}

BichromaticDressed bichromatic_dressed()
{
    BichromaticDressed b{};
    // strong resonant field: |1,N> = (|g,N> - |e,N-1>)/sqrt2,
    //                        |2,N> = (|g,N> + |e,N-1>)/sqrt2
    // mu_{ij,N} = <N,i| mu |j,N-1>, all equal to +-mu/2
    b.singly_dressed[0][0] = 0.5;  // mu_11
    b.singly_dressed[0][1] = 0.5;  // mu_12
    b.singly_dressed[1][0] = -0.5; // mu_21
    b.singly_dressed[1][1] = -0.5; // mu_22

    // doubly-dressed |n,+-> = (|2,N-n-1,M+n+1> +- |1,N-n,M+n>)/sqrt2: the two
    // degenerate bare-frequency moments mu_11 and mu_22 enter with opposite
    // sign and cancel
    b.doubly_omega0_plus = 0.5 * (b.singly_dressed[0][0] + b.singly_dressed[1][1]);
    b.doubly_omega0_minus = 0.5 * (b.singly_dressed[1][1] + b.singly_dressed[0][0]);

    // sigma_ii+ sigma_jj- = |i,N><N-1,i| j,N-1><N,j| = 0 for i != j, as an
    // operator identity, so the degenerate moments are uncorrelated in any
    // state
    b.degenerate_correlation = 0.0;
    return b;
}

DressedManifold aux_level_manifold(double rabi, double delta)
{
    const double op = 0.5 * std::sqrt(delta * delta + 2.0 * rabi * rabi);
    if (op == 0.0)
        throw ValidationError("dressed mixing undefined at zero Rabi frequency and splitting");
    const double alpha = 0.5 * delta / op;
    const double beta = 0.5 * rabi / op;

    DressedManifold m;
    m.basis_labels = {"1,N-1", "3,N-1", "b,N", "2,N"};
    m.alpha = alpha;
    m.beta = beta;
    m.states = {
        {"+,N", {0.5 * (1.0 - alpha), 0.5 * (1.0 + alpha), -beta, 0.0}, op},
        {"0,N", {-beta, beta, alpha, 0.0}, 0.0},
        {"2,N", {0.0, 0.0, 0.0, 1.0}, 0.0},
        {"-,N", {-0.5 * (1.0 + alpha), -0.5 * (1.0 - alpha), -beta, 0.0}, -op},
    };
    return m;
}

TransitionTable aux_level_transition_moments(const DressedManifold& m, const Vec3& mu12,
                                             const Vec3& mu32, double gamma1, double gamma2)
{
    // The dipole connects |1,N>,|3,N> (one manifold up) to |2,N>; the only
    // nonzero moments run from the dressed triplet of manifold N+1 into
    // |2,N>, while everything out of |2,N> into the manifold below vanishes.
    TransitionTable t;
    for (const DressedState& st : m.states) {
        if (st.label == "2,N")
            continue;
        const cplx c1 = std::conj(st.coefficients[0]);
        const cplx c3 = std::conj(st.coefficients[1]);
        Vec3 mom{};
        for (int k = 0; k < 3; ++k)
            mom[k] = (c1 * mu12[k] + c3 * mu32[k]).real();
        const std::string base = st.label.substr(0, st.label.find(','));
        t.entries.push_back({with_manifold(base, "N+1"), "2,N", mom,
                             weighted_rate(mu12, mu32, gamma1, gamma2, c1, c3)});
    }
    for (const char* below : {"+,N-1", "0,N-1", "-,N-1"})
        t.entries.push_back({"2,N", below, {0.0, 0.0, 0.0}, 0.0});
    return t;
}

DressedManifold single_drive_manifold(double rabi, double delta, double gamma1, double gamma2)
{
    if (!(gamma1 > 0.0))
        throw ValidationError("single_drive_manifold needs Gamma1 > 0");
    const double r = gamma2 / gamma1;
    const double alpha = 1.0 / std::sqrt(1.0 + 2.0 * r);
    const double beta = std::sqrt(2.0 * r) / std::sqrt(1.0 + 2.0 * r);

    DressedManifold m;
    m.basis_labels = {"2,N", "1,N-1", "3,N-1"};
    m.alpha = alpha;
    m.beta = beta;

    const double inv = 1.0 / kSqrt2;
    const bool degenerate = std::abs(delta - 0.5 * rabi) <= 1e-12 * std::max(1.0, rabi);
    if (degenerate) {
        // |s> = alpha|+> + beta|3~>, |a> = beta|+> - alpha|3~>
        m.states = {
            {"s,N", {alpha * inv, alpha * inv, beta}, 0.5 * rabi},
            {"a,N", {beta * inv, beta * inv, -alpha}, 0.5 * rabi},
            {"-,N", {inv, -inv, 0.0}, -0.5 * rabi},
        };
    } else {
        m.states = {
            {"+,N", {inv, inv, 0.0}, 0.5 * rabi},
            {"3~,N", {0.0, 0.0, 1.0}, delta},
            {"-,N", {inv, -inv, 0.0}, -0.5 * rabi},
        };
        std::stable_sort(m.states.begin(), m.states.end(),
                         [](const DressedState& a, const DressedState& b) {
                             return a.energy > b.energy;
                         });
    }
    return m;
}

TransitionTable single_drive_transition_moments(const DressedManifold& m, const Vec3& mu12,
                                                const Vec3& mu32, double gamma1, double gamma2)
{
    // slot 0 = |2,N>, slot 1 = |1,N-1>, slot 2 = |3,N-1>; the dipole lowers
    // |1,N-1> and |3,N-1> of manifold N onto |2,N-1> of manifold N-1
    TransitionTable t;
    for (const DressedState& from : m.states) {
        const cplx a1 = std::conj(from.coefficients[1]);
        const cplx a3 = std::conj(from.coefficients[2]);
        for (const DressedState& to : m.states) {
            const cplx ground = to.coefficients[0];
            Vec3 mom{};
            for (int k = 0; k < 3; ++k)
                mom[k] = ((a1 * mu12[k] + a3 * mu32[k]) * ground).real();
            const std::string from_base = from.label.substr(0, from.label.find(','));
            const std::string to_base = to.label.substr(0, to.label.find(','));
            t.entries.push_back({with_manifold(from_base, "N"), with_manifold(to_base, "N-1"),
                                 mom,
                                 weighted_rate(mu12, mu32, gamma1, gamma2, a1 * ground,
                                               a3 * ground)});
        }
    }
    return t;
}

DressedManifold both_drive_manifold(double rabi, double delta)
{
    // Note the splitting is sqrt(delta^2 + 2 rabi^2)/2; the mixing angles
    // alpha, beta normalize the printed eigenvectors exactly.
    const double ot = 0.5 * std::sqrt(delta * delta + 2.0 * rabi * rabi);
    if (ot == 0.0)
        throw ValidationError("dressed mixing undefined at zero Rabi frequency and splitting");
    const double alpha = 0.5 * delta / ot;
    const double beta = 0.5 * rabi / ot;

    DressedManifold m;
    m.basis_labels = {"1,N-1", "3,N-1", "2,N"};
    m.alpha = alpha;
    m.beta = beta;
    m.states = {
        {"+,N", {0.5 * (1.0 - alpha), 0.5 * (1.0 + alpha), -beta}, ot},
        {"0,N", {-beta, beta, alpha}, 0.0},
        {"-,N", {-0.5 * (1.0 + alpha), -0.5 * (1.0 - alpha), -beta}, -ot},
    };
    return m;
}

TransitionTable both_drive_transition_moments(const DressedManifold& m, double mu, double theta,
                                              double gamma)
{
    const Vec3 mu13{mu, 0.0, 0.0};
    const Vec3 mu23{mu * std::cos(theta), mu * std::sin(theta), 0.0};

    const DressedState* zero = nullptr;
    for (const DressedState& st : m.states)
        if (st.label == "0,N")
            zero = &st;
    if (zero == nullptr)
        throw ValidationError("manifold has no |0,N> state");

    TransitionTable t;
    // inbound: |i,N+1> -> |0,N>
    for (const DressedState& from : m.states) {
        const cplx a1 = std::conj(from.coefficients[0]);
        const cplx a3 = std::conj(from.coefficients[1]);
        const cplx ground = zero->coefficients[2];
        Vec3 mom{};
        for (int k = 0; k < 3; ++k)
            mom[k] = ((a1 * mu13[k] + a3 * mu23[k]) * ground).real();
        const std::string base = from.label.substr(0, from.label.find(','));
        t.entries.push_back({with_manifold(base, "N+1"), "0,N", mom,
                             weighted_rate(mu13, mu23, gamma, gamma, a1 * ground, a3 * ground)});
    }
    // outbound: |0,N> -> |j,N-1>
    const cplx b1 = std::conj(zero->coefficients[0]);
    const cplx b3 = std::conj(zero->coefficients[1]);
    for (const DressedState& to : m.states) {
        const cplx ground = to.coefficients[2];
        Vec3 mom{};
        for (int k = 0; k < 3; ++k)
            mom[k] = ((b1 * mu13[k] + b3 * mu23[k]) * ground).real();
        const std::string base = to.label.substr(0, to.label.find(','));
        t.entries.push_back({"0,N", with_manifold(base, "N-1"), mom,
                             weighted_rate(mu13, mu23, gamma, gamma, b1 * ground, b3 * ground)});
    }
    return t;
}

LambdaManifoldResult lambda_manifold(double rabi, double delta, double gamma1, double gamma2,
                                     double mu)
{
    const double ot = 0.5 * std::sqrt(delta * delta + 2.0 * rabi * rabi);
    if (ot == 0.0)
        throw ValidationError("dressed mixing undefined at zero Rabi frequency and splitting");
    const double alpha = 0.5 * delta / ot;
    const double beta = 0.5 * rabi / ot;
    const double inv = 1.0 / kSqrt2;

    LambdaManifoldResult out;
    DressedManifold& m = out.manifold;
    m.basis_labels = {"a,N", "s,N", "3,N-1"};
    m.alpha = alpha;
    m.beta = beta;
    m.states = {
        {"+,N", {-alpha * inv, inv, -beta}, ot},
        {"0,N", {-kSqrt2 * beta, 0.0, alpha}, 0.0},
        {"-,N", {-alpha * inv, -inv, -beta}, -ot},
    };

    // With parallel equal moments the dipole acts as sqrt(2) mu |s><3|; the
    // only inter-manifold link runs from the (3,N-1) component of manifold N
    // to the (s,N-1) component of the manifold below. The full pair table is
    // emitted so the classification sees every channel; the rows into |0,N>
    // are listed explicitly as well (all zero: its s-component vanishes).
    const Vec3 mu_s{kSqrt2 * mu, 0.0, 0.0};
    const double geff = 0.5 * (gamma1 + gamma2);
    TransitionTable& t = out.table;
    const auto moment_between = [&](const DressedState& from, const DressedState& to) {
        const cplx amp = std::conj(from.coefficients[2]) * to.coefficients[1];
        Vec3 mom{};
        for (int k = 0; k < 3; ++k)
            mom[k] = (amp * mu_s[k]).real();
        return mom;
    };
    const DressedState& zero = m.states[1];
    for (const DressedState& from : m.states) {
        const std::string base = from.label.substr(0, from.label.find(','));
        const Vec3 mom = moment_between(from, zero);
        t.entries.push_back({with_manifold(base, "N+1"), "0,N", mom,
                             geff * dot(mom, mom) / std::max(mu * mu, 1e-300)});
    }
    for (const DressedState& from : m.states) {
        const std::string from_base = from.label.substr(0, from.label.find(','));
        for (const DressedState& to : m.states) {
            const std::string to_base = to.label.substr(0, to.label.find(','));
            const Vec3 mom = moment_between(from, to);
            t.entries.push_back({with_manifold(from_base, "N"),
                                 with_manifold(to_base, "N-1"), mom,
                                 geff * dot(mom, mom) / std::max(mu * mu, 1e-300)});
        }
    }
    return out;
}

const char* state_class_name(StateClass c)
{
    switch (c) {
    case StateClass::Dark: return "dark";
    case StateClass::Trapping: return "trapping";
    case StateClass::Decoupled: return "decoupled";
    case StateClass::Ordinary: return "ordinary";
    }
    return "?";
}

std::vector<std::pair<std::string, StateClass>> classify_states(const TransitionTable& t)
{
    double max_moment = 0.0;
    for (const TransitionEntry& e : t.entries)
        max_moment = std::max(max_moment, norm(e.moment));
    const double thr = 1e-10 * max_moment;

    // group by the state identity without the manifold tag, so "0,N" matches
    // entries written as "0,N+1" or "0,N-1"
    auto base_of = [](const std::string& s) { return s.substr(0, s.find(',')); };

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> inout;
    for (const TransitionEntry& e : t.entries) {
        inout[base_of(e.from)].second.push_back(norm(e.moment)); // outbound
        inout[base_of(e.to)].first.push_back(norm(e.moment));    // inbound
    }

    std::vector<std::pair<std::string, StateClass>> out;
    for (const auto& [base, io] : inout) {
        const auto& ins = io.first;
        const auto& outs = io.second;
        const bool outs_all_zero =
            std::all_of(outs.begin(), outs.end(), [&](double v) { return v <= thr; });
        const bool ins_all_zero =
            std::all_of(ins.begin(), ins.end(), [&](double v) { return v <= thr; });
        StateClass cls = StateClass::Ordinary;
        if (!outs.empty() && outs_all_zero) {
            if (ins.empty())
                cls = StateClass::Dark;
            else if (ins_all_zero)
                cls = StateClass::Decoupled;
            else
                cls = StateClass::Trapping;
        }
        out.emplace_back(base + ",N", cls);
    }
    return out;
}

} // namespace qdint
