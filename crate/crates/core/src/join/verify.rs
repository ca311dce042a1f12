use crate::domain::SetObject;

/// Suffix containment check: every item of `r` from position `start` onward
/// occurs in `s` from position `start` onward.
///
/// Callers guarantee the first `start` items of `r` are already known to be in
/// `s`. Since both sides are sorted, any remaining item of `r` can only sit at
/// position `start` or later in `s`.
pub fn verify(r: &SetObject, s: &SetObject, start: usize) -> bool {
    verify_sorted(&r.items, &s.items, start)
}

pub fn verify_sorted<I: Ord>(r: &[I], s: &[I], start: usize) -> bool {
    let r = r.get(start..).unwrap_or(&[]);
    let s = s.get(start..).unwrap_or(&[]);
    if r.len() > s.len() {
        return false;
    }
    let mut j = 0;
    for item in r {
        loop {
            match s.get(j) {
                None => return false,
                Some(x) if x < item => j += 1,
                Some(x) if x == item => {
                    j += 1;
                    break;
                }
                Some(_) => return false,
            }
        }
    }
    true
}
