//! Maximum bipartite matching by augmenting paths (Kuhn's algorithm).

/// Size of a maximum matching between `left` (each entry lists the right
/// vertices adjacent to it) and `0..right_count`.
pub fn max_matching(left: &[&[usize]], right_count: usize) -> usize {
    let mut match_of_right = vec![usize::MAX; right_count];
    let mut matched = 0;
    for l in 0..left.len() {
        let mut visited = vec![false; right_count];
        if augment(l, left, &mut match_of_right, &mut visited) {
            matched += 1;
        }
    }
    matched
}

/// `true` iff every left vertex can be matched simultaneously.
pub fn saturates_left(left: &[&[usize]], right_count: usize) -> bool {
    if left.len() > right_count {
        return false;
    }
    let mut match_of_right = vec![usize::MAX; right_count];
    for l in 0..left.len() {
        let mut visited = vec![false; right_count];
        if !augment(l, left, &mut match_of_right, &mut visited) {
            return false;
        }
    }
    true
}

fn augment(l: usize, left: &[&[usize]], match_of_right: &mut [usize], visited: &mut [bool]) -> bool {
    for &r in left[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if match_of_right[r] == usize::MAX || augment(match_of_right[r], left, match_of_right, visited) {
            match_of_right[r] = l;
            return true;
        }
    }
    false
}
