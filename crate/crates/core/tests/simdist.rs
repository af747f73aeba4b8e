use netrans_core::simdist::{edit_distance_indel, lcs_length, similarity, SimError, MAX_LEN};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHABET: &[char] = &['柏', '林', '巴', '黎', '北', 'a', 'b', 'e', 'l', 'n', 'r', '1', '4', '7'];

fn random_string(rng: &mut ChaCha8Rng, max: usize) -> Vec<char> {
    let len = rng.random_range(0..=max);
    (0..len)
        .map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())])
        .collect()
}

fn is_subsequence(needle: &[char], hay: &[char]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|c| it.any(|h| h == c))
}

/// Longest subsequence of `a` found in `b`, by enumerating every subset of `a`.
fn brute_force_lcs(a: &[char], b: &[char]) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let n = mask.count_ones() as usize;
        if n <= best {
            continue;
        }
        let sub: Vec<char> = (0..a.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| a[i])
            .collect();
        if is_subsequence(&sub, b) {
            best = n;
        }
    }
    best
}

#[test]
fn identity_holds_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut brute_checked = 0;
    for _ in 0..10_000 {
        let a = random_string(&mut rng, 30);
        let b = random_string(&mut rng, 30);
        let lcs = lcs_length(&a, &b).unwrap();
        let ed = edit_distance_indel(&a, &b).unwrap();
        assert_eq!(2 * lcs + ed, a.len() + b.len(), "{a:?} {b:?}");
        assert_eq!(lcs, lcs_length(&b, &a).unwrap());
    }
    for _ in 0..3_000 {
        let a = random_string(&mut rng, 8);
        let b = random_string(&mut rng, 8);
        assert_eq!(lcs_length(&a, &b).unwrap(), brute_force_lcs(&a, &b), "{a:?} {b:?}");
        brute_checked += 1;
    }
    assert_eq!(brute_checked, 3_000);
}

#[test]
fn worked_example() {
    let a: Vec<char> = "bolin".chars().collect();
    let b: Vec<char> = "berlin".chars().collect();
    assert_eq!(lcs_length(&a, &b).unwrap(), 4);
    assert_eq!(edit_distance_indel(&a, &b).unwrap(), 3);
    assert_eq!(similarity("bolin", "berlin").unwrap().value(), 0.8);
    assert_eq!(similarity("Berlin", "BERLIN").unwrap().value(), 1.0);
}

#[test]
fn limits() {
    let long = vec!['x'; MAX_LEN + 1];
    assert_eq!(lcs_length(&long, &[]), Err(SimError::TooLong { len: MAX_LEN + 1 }));
    assert!(edit_distance_indel(&['x'; MAX_LEN], &['x'; MAX_LEN]).is_ok());
    assert_eq!(similarity("", "x"), Err(SimError::EmptyCandidate));
    assert_eq!(similarity("x", "").unwrap().value(), 0.0);
}
