//! Merel's matrices of determinant `n`.

/// All `[[a, b], [c, d]]` with `a > b >= 0`, `d > c >= 0` and `ad - bc = n`,
/// as `[a, b, c, d]`.
pub fn merel_heilbronn(n: u64) -> Vec<[i64; 4]> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 0..a {
            // d > c forces c (a - b) < n.
            let mut c = 0;
            while c * (a - b) < n {
                let num = n + b * c;
                if num % a == 0 {
                    let d = num / a;
                    if d > c {
                        out.push([a, b, c, d]);
                    }
                }
                c += 1;
            }
        }
    }
    out
}
