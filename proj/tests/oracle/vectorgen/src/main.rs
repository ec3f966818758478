//! Reference-vector generator for the posme test suite.
//!
//! Deliberately naive, straight-line reimplementation of the wire framing,
//! arena initialization, Merkle trees and the step loop, on top of the
//! official `blake3` crate. Values printed here are frozen into
//! tests/data/oracle_vectors.json and asserted by the C++ tests; this tool
//! never links or shares code with the library it checks.
//!
//! Regenerate with: cargo run --release > ../../data/oracle_vectors.json

use serde_json::{json, Map, Value};

fn h(parts: &[&[u8]]) -> [u8; 32] {
    let mut hasher = blake3::Hasher::new();
    for p in parts {
        hasher.update(p);
    }
    *hasher.finalize().as_bytes()
}

fn le8(x: u64) -> [u8; 8] {
    x.to_le_bytes()
}

fn hex(d: &[u8]) -> String {
    d.iter().map(|b| format!("{:02x}", b)).collect()
}

// ---- framing (one conforming implementation, spelled out longhand) ----

fn init_data(seed: &[u8; 32], i: u64, parent: Option<&[u8; 32]>) -> [u8; 32] {
    match parent {
        None => h(&[b"init", seed, &le8(i)]),
        Some(p) => h(&[b"init", seed, &le8(i), p]),
    }
}

fn init_causal(seed: &[u8; 32], i: u64, parent: Option<&[u8; 32]>) -> [u8; 32] {
    match parent {
        None => h(&[b"causal", seed, &le8(i)]),
        Some(p) => h(&[b"causal", seed, &le8(i), p]),
    }
}

fn first_bits(digest: &[u8; 32], d_hc: u32) -> u64 {
    let v = u64::from_le_bytes(digest[0..8].try_into().unwrap());
    if d_hc >= 64 {
        v
    } else {
        v & ((1u64 << d_hc) - 1)
    }
}

fn read_coord(cursor: &[u8; 32], j: u64, d_hc: u32) -> u64 {
    first_bits(&h(&[b"addr", cursor, &le8(j)]), d_hc)
}

fn write_coord(cursor: &[u8; 32], d_hc: u32) -> u64 {
    first_bits(&h(&[b"write", cursor]), d_hc)
}

fn chain_cursor(c: &[u8; 32], d: &[u8; 32], hh: &[u8; 32]) -> [u8; 32] {
    h(&[c, d, hh])
}

fn bind_data(old_d: &[u8; 32], c: &[u8; 32], old_h: &[u8; 32]) -> [u8; 32] {
    h(&[old_d, c, old_h])
}

fn bind_causal(old_h: &[u8; 32], c: &[u8; 32], t: u64) -> [u8; 32] {
    h(&[old_h, c, &le8(t)])
}

fn extend_transcript(t_prev: &[u8; 32], t: u64, c: &[u8; 32], r: &[u8; 32]) -> [u8; 32] {
    h(&[t_prev, &le8(t), c, r])
}

fn initial_transcript(seed: &[u8; 32], n: u64, r0: &[u8; 32]) -> [u8; 32] {
    h(&[seed, &le8(n), r0])
}

fn derive_seed(task_id: &[u8], nonce: &[u8]) -> [u8; 32] {
    h(&[&le8(task_id.len() as u64), task_id, &le8(nonce.len() as u64), nonce])
}

fn leaf_hash(v: u64, data: &[u8; 32], causal: &[u8; 32]) -> [u8; 32] {
    h(&[b"leaf", &le8(v), data, causal])
}

fn node_hash(l: &[u8; 32], r: &[u8; 32]) -> [u8; 32] {
    h(&[b"node", l, r])
}

fn rootleaf_hash(t: u64, r: &[u8; 32]) -> [u8; 32] {
    h(&[b"rootleaf", &le8(t), r])
}

fn pad_hash(idx: u64) -> [u8; 32] {
    h(&[b"pad", &le8(idx)])
}

// ---- naive structures ----

#[derive(Clone, Copy)]
struct Block {
    d: [u8; 32],
    hh: [u8; 32],
}

fn init_arena(seed: &[u8; 32], d_hc: u32) -> Vec<Block> {
    let n = 1u64 << d_hc;
    let mut a = vec![
        Block {
            d: init_data(seed, 0, None),
            hh: init_causal(seed, 0, None),
        };
        n as usize
    ];
    for i in 1..n {
        let p = (i >> 1) as usize;
        let pd = a[p].d;
        let ph = a[p].hh;
        a[i as usize] = Block {
            d: init_data(seed, i, Some(&pd)),
            hh: init_causal(seed, i, Some(&ph)),
        };
    }
    a
}

/// Recursive from-scratch root over explicit leaf hashes.
fn merkle_root(leaves: &[[u8; 32]]) -> [u8; 32] {
    if leaves.len() == 1 {
        return leaves[0];
    }
    let half = leaves.len() / 2;
    let l = merkle_root(&leaves[..half]);
    let r = merkle_root(&leaves[half..]);
    node_hash(&l, &r)
}

fn arena_root(a: &[Block]) -> [u8; 32] {
    let leaves: Vec<[u8; 32]> = a
        .iter()
        .enumerate()
        .map(|(v, b)| leaf_hash(v as u64, &b.d, &b.hh))
        .collect();
    merkle_root(&leaves)
}

fn commit_roots(roots: &[[u8; 32]]) -> [u8; 32] {
    let mut padded = roots.len().next_power_of_two();
    if padded == 0 {
        padded = 1;
    }
    let mut leaves = Vec::new();
    for (t, r) in roots.iter().enumerate() {
        leaves.push(rootleaf_hash(t as u64, r));
    }
    for idx in roots.len()..padded {
        leaves.push(pad_hash(idx as u64));
    }
    merkle_root(&leaves)
}

/// One step, rebuilding the root from scratch afterwards. Returns everything
/// the step touched so the trace can be frozen.
fn step(
    t: u64,
    a: &mut Vec<Block>,
    t_prev: &[u8; 32],
    d: u32,
    d_hc: u32,
) -> (Vec<u64>, u64, Block, Block, [u8; 32], [u8; 32], [u8; 32]) {
    let mut c = *t_prev;
    let mut reads = Vec::new();
    for j in 0..d as u64 {
        let v = read_coord(&c, j, d_hc);
        reads.push(v);
        let blk = a[v as usize];
        c = chain_cursor(&c, &blk.d, &blk.hh);
    }
    let vw = write_coord(&c, d_hc);
    let old = a[vw as usize];
    let new = Block {
        d: bind_data(&old.d, &c, &old.hh),
        hh: bind_causal(&old.hh, &c, t),
    };
    a[vw as usize] = new;
    let r = arena_root(a);
    let t_new = extend_transcript(t_prev, t, &c, &r);
    (reads, vw, old, new, c, r, t_new)
}

fn main() {
    let mut out = Map::new();

    // ---- BLAKE3 known-answer tests, official repeating input pattern ----
    let lens: Vec<usize> = vec![
        0, 1, 2, 3, 7, 8, 31, 32, 63, 64, 65, 100, 127, 128, 129, 511, 512, 1023, 1024, 1025,
        2048, 2049, 3072, 3073, 4096, 5000, 8192, 10000,
    ];
    let kats: Vec<Value> = lens
        .iter()
        .map(|&n| {
            let input: Vec<u8> = (0..n).map(|i| (i % 251) as u8).collect();
            json!({"len": n, "hash": hex(blake3::hash(&input).as_bytes())})
        })
        .collect();
    out.insert("blake3_kats".into(), Value::Array(kats));

    // ---- hashing module vectors ----
    let zero = [0u8; 32];
    let d11 = [0x11u8; 32];
    let d22 = [0x22u8; 32];
    let d33 = [0x33u8; 32];

    let parent = init_data(&zero, 0, None);
    let mut hv = Map::new();
    hv.insert("init_data_i0".into(), json!(hex(&init_data(&zero, 0, None))));
    hv.insert(
        "init_data_i1_parent_selfchain".into(),
        json!(hex(&init_data(&zero, 1, Some(&parent)))),
    );
    hv.insert(
        "init_data_i2_parent_selfchain".into(),
        json!(hex(&init_data(&zero, 2, Some(&parent)))),
    );
    hv.insert("init_causal_i0".into(), json!(hex(&init_causal(&zero, 0, None))));
    hv.insert(
        "init_causal_i1_parent_d11".into(),
        json!(hex(&init_causal(&zero, 1, Some(&d11)))),
    );
    hv.insert(
        "read_coord_zero_j0_u64".into(),
        json!(first_bits(&h(&[b"addr", &zero, &le8(0)]), 64)),
    );
    hv.insert("read_coord_zero_j0_dhc24".into(), json!(read_coord(&zero, 0, 24)));
    hv.insert("read_coord_zero_j0_dhc4".into(), json!(read_coord(&zero, 0, 4)));
    hv.insert("read_coord_zero_j1_dhc24".into(), json!(read_coord(&zero, 1, 24)));
    hv.insert("write_coord_zero_dhc24".into(), json!(write_coord(&zero, 24)));
    hv.insert(
        "write_coord_zero_u64".into(),
        json!(first_bits(&h(&[b"write", &zero]), 64)),
    );
    hv.insert(
        "chain_cursor_11_22_33".into(),
        json!(hex(&chain_cursor(&d11, &d22, &d33))),
    );
    hv.insert(
        "bind_data_11_22_33".into(),
        json!(hex(&bind_data(&d11, &d22, &d33))),
    );
    hv.insert("bind_causal_11_22_t1".into(), json!(hex(&bind_causal(&d11, &d22, 1))));
    hv.insert("bind_causal_11_22_t2".into(), json!(hex(&bind_causal(&d11, &d22, 2))));
    hv.insert(
        "extend_transcript_11_t3_22_33".into(),
        json!(hex(&extend_transcript(&d11, 3, &d22, &d33))),
    );
    hv.insert(
        "initial_transcript_zero_n1024_11".into(),
        json!(hex(&initial_transcript(&zero, 1024, &d11))),
    );
    hv.insert(
        "initial_transcript_zero_n2048_11".into(),
        json!(hex(&initial_transcript(&zero, 2048, &d11))),
    );
    hv.insert("derive_seed_ab_c".into(), json!(hex(&derive_seed(b"ab", b"c"))));
    hv.insert("derive_seed_a_bc".into(), json!(hex(&derive_seed(b"a", b"bc"))));
    hv.insert("derive_seed_empty".into(), json!(hex(&derive_seed(b"", b""))));
    hv.insert(
        "derive_seed_task1_nonce7".into(),
        json!(hex(&derive_seed(b"task1", b"nonce7"))),
    );

    let taa = [0xaau8; 32];
    let cbb = [0xbbu8; 32];
    let sigma = h(&[&taa, &cbb]);
    hv.insert("fs_sigma_aa_bb".into(), json!(hex(&sigma)));
    let fs_steps: Vec<u64> = (1..=4u64)
        .map(|i| (first_bits(&h(&[&sigma, &le8(i)]), 64) % 16) + 1)
        .collect();
    hv.insert("fs_steps_k16_q4".into(), json!(fs_steps));
    out.insert("hashing".into(), Value::Object(hv));

    // ---- merkle vectors ----
    let mut mv = Map::new();
    // Four known blocks: data = all t, causal = all t+0x80.
    let blocks4: Vec<Block> = (0..4u8)
        .map(|t| Block {
            d: [t; 32],
            hh: [t + 0x80; 32],
        })
        .collect();
    let leaves4: Vec<[u8; 32]> = blocks4
        .iter()
        .enumerate()
        .map(|(v, b)| leaf_hash(v as u64, &b.d, &b.hh))
        .collect();
    mv.insert("root_n4_known_blocks".into(), json!(hex(&merkle_root(&leaves4))));
    let mut swapped = blocks4.clone();
    swapped.swap(1, 2);
    let sleaves: Vec<[u8; 32]> = swapped
        .iter()
        .enumerate()
        .map(|(v, b)| leaf_hash(v as u64, &b.d, &b.hh))
        .collect();
    mv.insert("root_n4_swapped_12".into(), json!(hex(&merkle_root(&sleaves))));
    mv.insert(
        "leaf_hash_v3_11_22".into(),
        json!(hex(&leaf_hash(3, &d11, &d22))),
    );
    mv.insert("node_hash_11_22".into(), json!(hex(&node_hash(&d11, &d22))));

    // Root commitment over K=5 (6 roots, padded to 8): r_t = 32 bytes of t.
    let roots6: Vec<[u8; 32]> = (0..6u8).map(|t| [t; 32]).collect();
    mv.insert("commit_roots_k5".into(), json!(hex(&commit_roots(&roots6))));
    let mut roots_swapped = roots6.clone();
    roots_swapped.swap(3, 4);
    mv.insert(
        "commit_roots_k5_swapped_34".into(),
        json!(hex(&commit_roots(&roots_swapped))),
    );
    mv.insert("rootleaf_hash_t5_11".into(), json!(hex(&rootleaf_hash(5, &d11))));
    mv.insert("pad_hash_6".into(), json!(hex(&pad_hash(6))));
    out.insert("merkle".into(), Value::Object(mv));

    // ---- arena init, d_hc = 2 ----
    let a2 = init_arena(&zero, 2);
    let r0 = arena_root(&a2);
    let t0 = initial_transcript(&zero, 4, &r0);
    let mut av = Map::new();
    av.insert(
        "blocks".into(),
        json!(a2
            .iter()
            .map(|b| json!({"data": hex(&b.d), "causal": hex(&b.hh)}))
            .collect::<Vec<_>>()),
    );
    av.insert("r0".into(), json!(hex(&r0)));
    av.insert("t0".into(), json!(hex(&t0)));
    // Single-bit seed flip for comparison tests.
    let mut seed_flip = zero;
    seed_flip[0] ^= 0x01;
    let a2f = init_arena(&seed_flip, 2);
    av.insert("flipped_seed_block0_data".into(), json!(hex(&a2f[0].d)));
    // Skip-chain recomputation of a single vertex at d_hc = 3.
    let a3 = init_arena(&zero, 3);
    av.insert("dhc3_block5_data".into(), json!(hex(&a3[5].d)));
    av.insert("dhc3_block5_causal".into(), json!(hex(&a3[5].hh)));
    out.insert("arena_dhc2".into(), Value::Object(av));

    // ---- one step, d_hc = 2, d = 2, t = 1 ----
    let mut a = init_arena(&zero, 2);
    let (reads, vw, old, new, cursor, r1, t1) = step(1, &mut a, &t0, 2, 2);
    let mut sv = Map::new();
    sv.insert("read_coords".into(), json!(reads));
    sv.insert("write_coord".into(), json!(vw));
    sv.insert("old_data".into(), json!(hex(&old.d)));
    sv.insert("old_causal".into(), json!(hex(&old.hh)));
    sv.insert("new_data".into(), json!(hex(&new.d)));
    sv.insert("new_causal".into(), json!(hex(&new.hh)));
    sv.insert("cursor".into(), json!(hex(&cursor)));
    sv.insert("r1".into(), json!(hex(&r1)));
    sv.insert("t1".into(), json!(hex(&t1)));
    out.insert("step_dhc2".into(), Value::Object(sv));

    // ---- full run, d_hc = 4, K = 16, d = 4 ----
    let d_hc = 4u32;
    let k = 16u64;
    let d = 4u32;
    let mut a = init_arena(&zero, d_hc);
    let r0 = arena_root(&a);
    let mut roots = vec![r0];
    let mut t_cur = initial_transcript(&zero, 1 << d_hc, &r0);
    let mut transcripts = vec![t_cur];
    let mut write_coords = Vec::new();
    for t in 1..=k {
        let (_, vw, _, _, _, r, tn) = step(t, &mut a, &t_cur, d, d_hc);
        roots.push(r);
        transcripts.push(tn);
        write_coords.push(vw);
        t_cur = tn;
    }
    let mut gv = Map::new();
    gv.insert("t_k".into(), json!(hex(&t_cur)));
    gv.insert("r_k".into(), json!(hex(roots.last().unwrap())));
    gv.insert("write_coords".into(), json!(write_coords));
    let mut cat = Vec::new();
    for r in &roots {
        cat.extend_from_slice(r);
    }
    gv.insert("roots_digest".into(), json!(hex(blake3::hash(&cat).as_bytes())));
    let mut cat = Vec::new();
    for t in &transcripts {
        cat.extend_from_slice(t);
    }
    gv.insert(
        "transcripts_digest".into(),
        json!(hex(blake3::hash(&cat).as_bytes())),
    );
    // Same run from a one-bit-flipped seed.
    let mut a = init_arena(&seed_flip, d_hc);
    let fr0 = arena_root(&a);
    let mut ft = initial_transcript(&seed_flip, 1 << d_hc, &fr0);
    for t in 1..=k {
        let (_, _, _, _, _, _, tn) = step(t, &mut a, &ft, d, d_hc);
        ft = tn;
    }
    gv.insert("t_k_flipped_seed".into(), json!(hex(&ft)));
    out.insert("gen_dhc4".into(), Value::Object(gv));

    println!("{}", serde_json::to_string_pretty(&Value::Object(out)).unwrap());
}
