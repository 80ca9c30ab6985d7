mod common;

use common::*;
use hbb_qss::exploit::{full_attack_strategy, intercept_resend_strategy};
use hbb_qss::hbb::{
    error_rate, infer_alice, run_session, AttackStrategy, Interceptor, Response, RevealedRound,
    Role, SessionConfig,
};
use hbb_qss::qstate::{Basis, Register, Sign};
use hbb_qss::rng::QssRng;
use hbb_qss::Result;

fn config(rounds: usize, seed: u64) -> SessionConfig {
    SessionConfig {
        rounds,
        check_fraction: 0.5,
        seed,
    }
}

#[test]
fn half_of_all_rounds_are_kept() {
    let t = run_session(&config(10_000, 1), None).unwrap();
    let rate = t.sifted_count() as f64 / t.rounds.len() as f64;
    assert!((rate - 0.5).abs() <= three_sigma(0.5, t.rounds.len()));
    for r in &t.rounds {
        assert_eq!(r.sifted, r.bases.x_count() % 2 == 1);
        assert_eq!(r.role == Role::Discarded, !r.sifted);
    }
}

/// On every kept honest round Bob and Charlie recover Alice's outcome.
#[test]
fn honest_rounds_reconstruct_alice() {
    let t = run_session(&config(10_000, 2), None).unwrap();
    let mut checked = 0;
    for r in t.rounds.iter().filter(|r| r.sifted) {
        if let Some(c) = r.charlie_announced {
            assert_eq!(infer_alice(r.bob, c), r.alice);
            checked += 1;
        }
    }
    assert!(checked > 0);
    assert_eq!(t.check_error_rate, Some(0.0));
    assert_eq!(t.key_alice, t.key_reconstructed);
    assert_eq!(t.key_alice.len(), t.key_reconstructed.len());
}

#[test]
fn equal_seeds_give_identical_transcripts() {
    let a = run_session(&config(3000, 9), Some(&mut full_attack_strategy())).unwrap();
    let b = run_session(&config(3000, 9), Some(&mut full_attack_strategy())).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
    let c = run_session(&config(3000, 10), Some(&mut full_attack_strategy())).unwrap();
    assert_ne!(a.rounds, c.rounds);
}

/// Records the order of hook calls and what each hook could see.
#[derive(Default)]
struct Spy {
    events: Vec<(usize, &'static str)>,
    announced: Vec<(usize, Basis)>,
    revealed: Vec<RevealedRound>,
}

impl AttackStrategy for Spy {
    fn name(&self) -> &str {
        "spy"
    }

    fn ancilla(&self) -> Vec<Register> {
        Vec::new()
    }

    fn intercept(&mut self, round_id: usize, access: &mut Interceptor<'_>) -> Result<()> {
        assert!(access.accessible().iter().all(|l| l != "A"));
        self.events.push((round_id, "intercept"));
        Ok(())
    }

    fn announce_basis(&mut self, round_id: usize, _rng: &mut QssRng) -> Basis {
        self.events.push((round_id, "announce"));
        let basis = if round_id % 3 == 0 { Basis::X } else { Basis::Y };
        self.announced.push((round_id, basis));
        basis
    }

    fn respond(&mut self, round: &RevealedRound, access: &mut Interceptor<'_>) -> Result<Response> {
        assert!(access.accessible().iter().all(|l| l != "A" && l != "B"));
        self.events.push((round.round_id, "respond"));
        self.revealed.push(*round);
        let sign = access.measure("C", round.bases.charlie)?;
        Ok(match round.role {
            Role::Check => Response::Announce(sign),
            _ => Response::Guess(Sign::Plus),
        })
    }
}

#[test]
fn bases_are_revealed_only_after_charlie_commits() {
    let mut spy = Spy::default();
    let t = run_session(&config(500, 4), Some(&mut spy)).unwrap();
    for (k, r) in t.rounds.iter().enumerate() {
        let events: Vec<_> = spy.events.iter().filter(|e| e.0 == k).map(|e| e.1).collect();
        if r.sifted {
            assert_eq!(events, ["intercept", "announce", "respond"]);
        } else {
            assert_eq!(events, ["intercept", "announce"]);
        }
        let announced = spy.announced.iter().find(|a| a.0 == k).unwrap().1;
        assert_eq!(r.bases.charlie, announced);
    }
    assert!(spy.revealed.iter().all(|r| r.role != Role::Discarded));
    // Measuring C honestly in the committed basis never fails a check.
    assert_eq!(t.check_error_rate, Some(0.0));
}

#[test]
fn intercept_resend_error_matches_enumeration() {
    let t = run_session(&config(10_000, 42), Some(&mut intercept_resend_strategy())).unwrap();
    let checks = t.check_count();
    let err = error_rate(&t).unwrap();
    assert!((err - 0.25).abs() <= three_sigma(0.25, checks), "{err} over {checks}");
}

#[test]
fn zero_check_fraction_leaves_error_undefined() {
    let t = run_session(
        &SessionConfig {
            rounds: 200,
            check_fraction: 0.0,
            seed: 1,
        },
        None,
    )
    .unwrap();
    assert_eq!(t.check_error_rate, None);
    assert!(error_rate(&t).is_err());
    assert_eq!(t.key_count(), t.sifted_count());
}
