use mltt_core::bidir::{check, check_ctx, check_ty};
use mltt_core::conv_typed::conv_tm;
use mltt_core::conv_untyped::uconv;
use mltt_core::harness::{Gen, GenConfig};
use mltt_core::normalize::deep_nf_tm;
use mltt_core::reduction::{machine_whnf, whnf};
use mltt_core::surface::{parse_term, print};
use mltt_core::{Backend, Subst, Term};
use proptest::prelude::*;

const FUEL: u64 = 1_000_000;

// Reference operations, one variable at a time.

fn ref_shift(t: &Term, cutoff: usize, n: usize) -> Term {
    match t {
        Term::Var(i) if *i >= cutoff => Term::Var(i + n),
        Term::Var(_) => t.clone(),
        _ => t.map_children(|c, k| ref_shift(c, cutoff + k, n)),
    }
}

/// Replaces index `j` by `s` (scoped at the outer level) and closes the gap.
fn ref_subst(t: &Term, j: usize, s: &Term) -> Term {
    match t {
        Term::Var(i) if *i == j => ref_shift(s, 0, j),
        Term::Var(i) if *i > j => Term::Var(i - 1),
        Term::Var(_) => t.clone(),
        _ => t.map_children(|c, k| ref_subst(c, j + k, s)),
    }
}

/// A parallel substitution computed as a sequence of single ones: make room
/// for the tail, then eliminate the explicit indices from the innermost out.
fn ref_parallel(t: &Term, explicit: &[Term], tail: usize) -> Term {
    let k = explicit.len();
    let mut out = ref_shift(t, k, tail);
    for (j, e) in explicit.iter().enumerate() {
        out = ref_subst(&out, 0, &ref_shift(e, 0, k - 1 - j));
    }
    out
}

fn arb_term(max_var: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..max_var).prop_map(Term::Var),
        Just(Term::Univ),
        Just(Term::Nat),
        Just(Term::Zero),
        Just(Term::Empty),
    ];
    leaf.prop_recursive(5, 48, 5, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pi(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::lam(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::sig(a, b)),
            (inner.clone(), inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(a, b, c, d)| Term::pair(a, b, c, d)),
            inner.clone().prop_map(Term::fst),
            inner.clone().prop_map(Term::snd),
            inner.clone().prop_map(Term::succ),
            (inner.clone(), inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(a, b, c, d)| Term::nat_elim(a, b, c, d)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::empty_elim(a, b)),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(a, b, c)| Term::id(a, b, c)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::refl(a, b)),
            (inner.clone(), inner.clone(), inner.clone(), inner.clone(), inner)
                .prop_map(|(a, b, c, d, e)| Term::id_elim(a, b, c, d, e)),
        ]
    })
}

fn arb_subst() -> impl Strategy<Value = Subst> {
    (prop::collection::vec(arb_term(4), 0..4), 0..3usize)
        .prop_map(|(explicit, tail)| Subst::new(explicit, tail))
}

/// A term whose free indices are all below `scope`.
fn arb_scoped(scope: usize) -> impl Strategy<Value = Term> {
    arb_term(scope + 2).prop_filter("scoped", move |t| t.is_scoped(scope))
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("v{k}")).collect()
}

proptest! {
    #[test]
    fn single_substitution_matches_reference(t in arb_term(5), u in arb_term(5)) {
        prop_assert_eq!(t.subst1(&u), ref_subst(&t, 0, &u));
    }

    #[test]
    fn parallel_substitution_matches_single_steps(t in arb_term(6), s in arb_subst()) {
        prop_assert_eq!(t.subst(&s), ref_parallel(&t, s.explicit(), s.tail_shift()));
    }

    #[test]
    fn shift_matches_reference(t in arb_term(5), n in 0..3usize) {
        prop_assert_eq!(t.shift_by(n), ref_shift(&t, 0, n));
        prop_assert_eq!(t.shift_by(n).subst(&Subst::shift(0)), t.shift_by(n));
    }

    #[test]
    fn identity_is_neutral(t in arb_term(5), s in arb_subst()) {
        prop_assert_eq!(t.subst(&Subst::id()), t);
        prop_assert_eq!(Subst::id().compose(&s), s.clone());
        prop_assert_eq!(s.compose(&Subst::id()), s);
    }

    #[test]
    fn composition_is_associative(a in arb_subst(), b in arb_subst(), c in arb_subst()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn composition_is_sequential_application(t in arb_term(6), a in arb_subst(), b in arb_subst()) {
        prop_assert_eq!(t.subst(&a.compose(&b)), t.subst(&a).subst(&b));
    }

    #[test]
    fn lift_acts_under_a_binder(t in arb_term(6), s in arb_subst()) {
        let lam = Term::lam(Term::Nat, t.clone());
        prop_assert_eq!(lam.subst(&s), Term::lam(Term::Nat, t.subst(&s.lift())));
    }

    #[test]
    fn strengthen_undoes_shift(t in arb_term(5)) {
        prop_assert_eq!(t.shift().strengthen(), Some(t));
    }

    #[test]
    fn step_and_machine_agree_at_every_fuel(t in arb_term(3), fuel in 0..40u64) {
        prop_assert_eq!(whnf(&t, fuel), machine_whnf(&t, fuel));
    }

    #[test]
    fn print_then_parse_is_identity_on_raw_terms(t in arb_scoped(3)) {
        let n = names(3);
        let src = print(&t, &n);
        prop_assert_eq!(parse_term(&src, &n).map_err(|e| e.to_string()), Ok(t), "{}", src);
    }

    #[test]
    fn print_then_parse_is_identity_on_generated_terms(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let (g, a, t) = Gen::new(&cfg, 0).typed_term();
        let n = names(g.len());
        for x in [&a, &t] {
            let src = print(x, &n);
            let back = parse_term(&src, &n).ok();
            prop_assert_eq!(back.as_ref(), Some(x), "{}", src);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_terms_are_well_typed(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let mut gen = Gen::new(&cfg, 0);
        let (g, a, t) = gen.typed_term();
        for b in Backend::ALL {
            prop_assert!(check_ctx(&g, &b, FUEL).is_accept());
            prop_assert!(check_ty(&g, &a, &b, FUEL).is_accept());
            prop_assert!(check(&g, &t, &a, &b, FUEL).is_accept(), "{b}: {} : {}", print(&t, &names(g.len())), print(&a, &names(g.len())));
        }
        let ty = gen.ty(&g, cfg.max_depth);
        prop_assert!(check_ty(&g, &ty, &Backend::Typed, FUEL).is_accept());
    }

    #[test]
    fn generated_conversion_queries_are_well_typed(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let q = Gen::new(&cfg, 1).conv_query();
        for t in &q.terms {
            prop_assert!(check(&q.ctx, t, &q.ty, &Backend::Typed, FUEL).is_accept(), "{}", q);
        }
    }

    #[test]
    fn variants_are_convertible(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let mut gen = Gen::new(&cfg, 2);
        let (g, a, t) = gen.typed_term();
        let v = gen.variant(&g, &a, &t);
        prop_assert!(check(&g, &v, &a, &Backend::Typed, FUEL).is_accept());
        prop_assert!(conv_tm(&g, &a, &t, &v, FUEL).is_accept());
    }

    #[test]
    fn normal_forms_are_convertible_and_stable(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let (g, a, t) = Gen::new(&cfg, 3).typed_term();
        let nf = deep_nf_tm(&g, &a, &t, FUEL).accepted();
        prop_assert!(nf.is_some());
        let nf = nf.unwrap();
        prop_assert!(conv_tm(&g, &a, &t, &nf, FUEL).is_accept());
        prop_assert_eq!(deep_nf_tm(&g, &a, &nf, FUEL).accepted(), Some(nf));
    }

    #[test]
    fn typed_and_untyped_agree_on_generated_queries(seed in any::<u64>()) {
        let cfg = GenConfig::with_seed(seed);
        let q = Gen::new(&cfg, 4).conv_query();
        let (t, u) = (&q.terms[0], &q.terms[1]);
        let typed = conv_tm(&q.ctx, &q.ty, t, u, FUEL).kind();
        let untyped = uconv(t, u, FUEL).kind();
        prop_assert_eq!(typed, untyped, "{}", q);
    }
}
