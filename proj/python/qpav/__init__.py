"""Committee selection from partial approval votes.

Thin wrapper around the compiled ``_qpav`` extension module.
"""

try:
    from . import _qpav as _impl  # installed layout: extension inside the package
except ImportError:  # development layout: extension on sys.path
    import _qpav as _impl

BudgetError = _impl.BudgetError
Profile = _impl.Profile
ValidationError = _impl.ValidationError
alpha_hat = _impl.alpha_hat
approval_fraction_curve = _impl.approval_fraction_curve
av_committee = _impl.av_committee
check_ejr = _impl.check_ejr
check_jr = _impl.check_jr
check_oas = _impl.check_oas
delta_add = _impl.delta_add
delta_star = _impl.delta_star
delta_swap = _impl.delta_swap
exhaustive_pav = _impl.exhaustive_pav
fig1a_profile = _impl.fig1a_profile
filter_popular = _impl.filter_popular
greedy_cover = _impl.greedy_cover
lp_search = _impl.lp_search
ls_pav = _impl.ls_pav
pav_score = _impl.pav_score
run_exact_pav = _impl.run_exact_pav
run_noisy_pav = _impl.run_noisy_pav
run_ucb_pav = _impl.run_ucb_pav

__all__ = [
    "BudgetError",
    "Profile",
    "ValidationError",
    "alpha_hat",
    "approval_fraction_curve",
    "av_committee",
    "check_ejr",
    "check_jr",
    "check_oas",
    "delta_add",
    "delta_star",
    "delta_swap",
    "exhaustive_pav",
    "fig1a_profile",
    "filter_popular",
    "greedy_cover",
    "lp_search",
    "ls_pav",
    "pav_score",
    "run_exact_pav",
    "run_noisy_pav",
    "run_ucb_pav",
]
