//! C ABI over arkworks BN254 for the Python layer.
//!
//! Buffer conventions (all little-endian arkworks canonical encodings):
//!   Fr     32 bytes
//!   G1     64 bytes uncompressed affine / 32 bytes compressed
//!   G2    128 bytes uncompressed affine / 64 bytes compressed
//!   GT    384 bytes (full Fq12 element)
//!
//! Internal entry points use unchecked deserialization: inputs are expected
//! to be produced by this library. Wire-facing decompression validates
//! curve membership and subgroup.

use ark_bn254::{Bn254, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::scalar_mul::variable_base::VariableBaseMSM;
use ark_ec::{AffineRepr, CurveGroup};
use ark_ff::PrimeField;
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

pub const FR_LEN: usize = 32;
pub const G1_LEN: usize = 64;
pub const G2_LEN: usize = 128;
pub const GT_LEN: usize = 384;
pub const G1_COMP_LEN: usize = 32;
pub const G2_COMP_LEN: usize = 64;

const OK: i32 = 0;
const ERR_DESERIALIZE: i32 = 1;
const ERR_PANIC: i32 = 99;

fn guard<F: FnOnce() -> i32>(f: F) -> i32 {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(ERR_PANIC)
}

unsafe fn in_buf<'a>(ptr: *const u8, len: usize) -> &'a [u8] {
    slice::from_raw_parts(ptr, len)
}

unsafe fn out_buf<'a>(ptr: *mut u8, len: usize) -> &'a mut [u8] {
    slice::from_raw_parts_mut(ptr, len)
}

fn read_fr(bytes: &[u8]) -> Result<Fr, i32> {
    Fr::deserialize_compressed(bytes).map_err(|_| ERR_DESERIALIZE)
}

fn read_frs(ptr: *const u8, n: usize) -> Result<Vec<Fr>, i32> {
    let data = unsafe { in_buf(ptr, n * FR_LEN) };
    data.chunks_exact(FR_LEN).map(read_fr).collect()
}

fn read_g1(bytes: &[u8]) -> Result<G1Affine, i32> {
    G1Affine::deserialize_uncompressed_unchecked(bytes).map_err(|_| ERR_DESERIALIZE)
}

fn read_g2(bytes: &[u8]) -> Result<G2Affine, i32> {
    G2Affine::deserialize_uncompressed_unchecked(bytes).map_err(|_| ERR_DESERIALIZE)
}

fn read_g1s(ptr: *const u8, n: usize) -> Result<Vec<G1Affine>, i32> {
    let data = unsafe { in_buf(ptr, n * G1_LEN) };
    data.chunks_exact(G1_LEN).map(read_g1).collect()
}

fn read_g2s(ptr: *const u8, n: usize) -> Result<Vec<G2Affine>, i32> {
    let data = unsafe { in_buf(ptr, n * G2_LEN) };
    data.chunks_exact(G2_LEN).map(read_g2).collect()
}

fn read_gt(bytes: &[u8]) -> Result<PairingOutput<Bn254>, i32> {
    PairingOutput::<Bn254>::deserialize_uncompressed_unchecked(bytes).map_err(|_| ERR_DESERIALIZE)
}

fn write_obj<T: CanonicalSerialize>(obj: &T, out: &mut [u8]) -> i32 {
    match obj.serialize_uncompressed(out) {
        Ok(()) => OK,
        Err(_) => ERR_DESERIALIZE,
    }
}

fn write_g1s(points: &[G1Projective], out: *mut u8) -> i32 {
    let affs = G1Projective::normalize_batch(points);
    let buf = unsafe { out_buf(out, affs.len() * G1_LEN) };
    for (a, chunk) in affs.iter().zip(buf.chunks_exact_mut(G1_LEN)) {
        if write_obj(a, chunk) != OK {
            return ERR_DESERIALIZE;
        }
    }
    OK
}

fn write_g2s(points: &[G2Projective], out: *mut u8) -> i32 {
    let affs = G2Projective::normalize_batch(points);
    let buf = unsafe { out_buf(out, affs.len() * G2_LEN) };
    for (a, chunk) in affs.iter().zip(buf.chunks_exact_mut(G2_LEN)) {
        if write_obj(a, chunk) != OK {
            return ERR_DESERIALIZE;
        }
    }
    OK
}

// ---- constants ----

#[no_mangle]
pub extern "C" fn bk_g1_generator(out: *mut u8) -> i32 {
    guard(|| write_obj(&G1Affine::generator(), unsafe { out_buf(out, G1_LEN) }))
}

#[no_mangle]
pub extern "C" fn bk_g2_generator(out: *mut u8) -> i32 {
    guard(|| write_obj(&G2Affine::generator(), unsafe { out_buf(out, G2_LEN) }))
}

#[no_mangle]
pub extern "C" fn bk_gt_generator(out: *mut u8) -> i32 {
    guard(|| {
        let gt = Bn254::pairing(G1Affine::generator(), G2Affine::generator());
        write_obj(&gt, unsafe { out_buf(out, GT_LEN) })
    })
}

#[no_mangle]
pub extern "C" fn bk_g1_identity(out: *mut u8) -> i32 {
    guard(|| write_obj(&G1Affine::identity(), unsafe { out_buf(out, G1_LEN) }))
}

#[no_mangle]
pub extern "C" fn bk_g2_identity(out: *mut u8) -> i32 {
    guard(|| write_obj(&G2Affine::identity(), unsafe { out_buf(out, G2_LEN) }))
}

#[no_mangle]
pub extern "C" fn bk_gt_identity(out: *mut u8) -> i32 {
    guard(|| write_obj(&PairingOutput::<Bn254>::default(), unsafe { out_buf(out, GT_LEN) }))
}

#[no_mangle]
pub extern "C" fn bk_fr_modulus(out: *mut u8) -> i32 {
    guard(|| {
        let m = Fr::MODULUS;
        let bytes = unsafe { out_buf(out, FR_LEN) };
        for (i, limb) in m.0.iter().enumerate() {
            bytes[i * 8..(i + 1) * 8].copy_from_slice(&limb.to_le_bytes());
        }
        OK
    })
}

// ---- single-element ops ----

macro_rules! binop {
    ($name:ident, $len:expr, $read:ident, $op:expr) => {
        #[no_mangle]
        pub extern "C" fn $name(a: *const u8, b: *const u8, out: *mut u8) -> i32 {
            guard(|| {
                let (pa, pb) = unsafe { (in_buf(a, $len), in_buf(b, $len)) };
                match ($read(pa), $read(pb)) {
                    (Ok(x), Ok(y)) => write_obj(&$op(x, y), unsafe { out_buf(out, $len) }),
                    _ => ERR_DESERIALIZE,
                }
            })
        }
    };
}

binop!(bk_g1_add, G1_LEN, read_g1, |x: G1Affine, y: G1Affine| {
    (x + y).into_affine()
});
binop!(bk_g2_add, G2_LEN, read_g2, |x: G2Affine, y: G2Affine| {
    (x + y).into_affine()
});
binop!(bk_gt_mul, GT_LEN, read_gt, |x: PairingOutput<Bn254>,
                                    y: PairingOutput<Bn254>| {
    x + y
});

#[no_mangle]
pub extern "C" fn bk_g1_neg(a: *const u8, out: *mut u8) -> i32 {
    guard(|| match read_g1(unsafe { in_buf(a, G1_LEN) }) {
        Ok(x) => write_obj(&(-x), unsafe { out_buf(out, G1_LEN) }),
        Err(e) => e,
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_neg(a: *const u8, out: *mut u8) -> i32 {
    guard(|| match read_g2(unsafe { in_buf(a, G2_LEN) }) {
        Ok(x) => write_obj(&(-x), unsafe { out_buf(out, G2_LEN) }),
        Err(e) => e,
    })
}

#[no_mangle]
pub extern "C" fn bk_gt_inv(a: *const u8, out: *mut u8) -> i32 {
    guard(|| match read_gt(unsafe { in_buf(a, GT_LEN) }) {
        Ok(x) => write_obj(&(-x), unsafe { out_buf(out, GT_LEN) }),
        Err(e) => e,
    })
}

#[no_mangle]
pub extern "C" fn bk_g1_mul(p: *const u8, s: *const u8, out: *mut u8) -> i32 {
    guard(|| {
        let (pt, sc) = unsafe { (in_buf(p, G1_LEN), in_buf(s, FR_LEN)) };
        match (read_g1(pt), read_fr(sc)) {
            (Ok(x), Ok(k)) => write_obj(&(x * k).into_affine(), unsafe { out_buf(out, G1_LEN) }),
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_mul(p: *const u8, s: *const u8, out: *mut u8) -> i32 {
    guard(|| {
        let (pt, sc) = unsafe { (in_buf(p, G2_LEN), in_buf(s, FR_LEN)) };
        match (read_g2(pt), read_fr(sc)) {
            (Ok(x), Ok(k)) => write_obj(&(x * k).into_affine(), unsafe { out_buf(out, G2_LEN) }),
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_gt_exp(a: *const u8, s: *const u8, out: *mut u8) -> i32 {
    guard(|| {
        let (pa, sc) = unsafe { (in_buf(a, GT_LEN), in_buf(s, FR_LEN)) };
        match (read_gt(pa), read_fr(sc)) {
            (Ok(x), Ok(k)) => write_obj(&(x * k), unsafe { out_buf(out, GT_LEN) }),
            _ => ERR_DESERIALIZE,
        }
    })
}

// ---- vector ops ----

#[no_mangle]
pub extern "C" fn bk_g1_msm(ps: *const u8, ss: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        if n == 0 {
            return bk_g1_identity(out);
        }
        match (read_g1s(ps, n), read_frs(ss, n)) {
            (Ok(points), Ok(scalars)) => match G1Projective::msm(&points, &scalars) {
                Ok(acc) => write_obj(&acc.into_affine(), unsafe { out_buf(out, G1_LEN) }),
                Err(_) => ERR_DESERIALIZE,
            },
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_msm(ps: *const u8, ss: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        if n == 0 {
            return bk_g2_identity(out);
        }
        match (read_g2s(ps, n), read_frs(ss, n)) {
            (Ok(points), Ok(scalars)) => match G2Projective::msm(&points, &scalars) {
                Ok(acc) => write_obj(&acc.into_affine(), unsafe { out_buf(out, G2_LEN) }),
                Err(_) => ERR_DESERIALIZE,
            },
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g1_mul_each(ps: *const u8, ss: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g1s(ps, n), read_frs(ss, n)) {
            (Ok(points), Ok(scalars)) => {
                let prods: Vec<G1Projective> =
                    points.iter().zip(&scalars).map(|(p, s)| *p * s).collect();
                write_g1s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_mul_each(ps: *const u8, ss: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g2s(ps, n), read_frs(ss, n)) {
            (Ok(points), Ok(scalars)) => {
                let prods: Vec<G2Projective> =
                    points.iter().zip(&scalars).map(|(p, s)| *p * s).collect();
                write_g2s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g1_scale(ps: *const u8, s: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g1s(ps, n), read_fr(unsafe { in_buf(s, FR_LEN) })) {
            (Ok(points), Ok(k)) => {
                let prods: Vec<G1Projective> = points.iter().map(|p| *p * k).collect();
                write_g1s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_scale(ps: *const u8, s: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g2s(ps, n), read_fr(unsafe { in_buf(s, FR_LEN) })) {
            (Ok(points), Ok(k)) => {
                let prods: Vec<G2Projective> = points.iter().map(|p| *p * k).collect();
                write_g2s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g1_hadamard(a: *const u8, b: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g1s(a, n), read_g1s(b, n)) {
            (Ok(xs), Ok(ys)) => {
                let prods: Vec<G1Projective> =
                    xs.iter().zip(&ys).map(|(x, y)| *x + *y).collect();
                write_g1s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_hadamard(a: *const u8, b: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g2s(a, n), read_g2s(b, n)) {
            (Ok(xs), Ok(ys)) => {
                let prods: Vec<G2Projective> =
                    xs.iter().zip(&ys).map(|(x, y)| *x + *y).collect();
                write_g2s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g1_sub_each(a: *const u8, b: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g1s(a, n), read_g1s(b, n)) {
            (Ok(xs), Ok(ys)) => {
                let diffs: Vec<G1Projective> =
                    xs.iter().zip(&ys).map(|(x, y)| *x - *y).collect();
                write_g1s(&diffs, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_sub_each(a: *const u8, b: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g2s(a, n), read_g2s(b, n)) {
            (Ok(xs), Ok(ys)) => {
                let diffs: Vec<G2Projective> =
                    xs.iter().zip(&ys).map(|(x, y)| *x - *y).collect();
                write_g2s(&diffs, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

/// out[i] = left[i] + x * right[i]  (one halving round of the fold recursion)
#[no_mangle]
pub extern "C" fn bk_g1_fold(l: *const u8, r: *const u8, x: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g1s(l, n), read_g1s(r, n), read_fr(unsafe { in_buf(x, FR_LEN) })) {
            (Ok(ls), Ok(rs), Ok(k)) => {
                let prods: Vec<G1Projective> =
                    ls.iter().zip(&rs).map(|(a, b)| *a + (*b * k)).collect();
                write_g1s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_fold(l: *const u8, r: *const u8, x: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g2s(l, n), read_g2s(r, n), read_fr(unsafe { in_buf(x, FR_LEN) })) {
            (Ok(ls), Ok(rs), Ok(k)) => {
                let prods: Vec<G2Projective> =
                    ls.iter().zip(&rs).map(|(a, b)| *a + (*b * k)).collect();
                write_g2s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

/// out[i] = base ^ scalars[i] for a single fixed base.
#[no_mangle]
pub extern "C" fn bk_g1_fixed_mul(base: *const u8, ss: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g1(unsafe { in_buf(base, G1_LEN) }), read_frs(ss, n)) {
            (Ok(b), Ok(scalars)) => {
                let b = G1Projective::from(b);
                let prods: Vec<G1Projective> = scalars.iter().map(|s| b * s).collect();
                write_g1s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_fixed_mul(base: *const u8, ss: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        match (read_g2(unsafe { in_buf(base, G2_LEN) }), read_frs(ss, n)) {
            (Ok(b), Ok(scalars)) => {
                let b = G2Projective::from(b);
                let prods: Vec<G2Projective> = scalars.iter().map(|s| b * s).collect();
                write_g2s(&prods, out)
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

// ---- pairings ----

#[no_mangle]
pub extern "C" fn bk_multi_pairing(g1s: *const u8, g2s: *const u8, n: u64, out: *mut u8) -> i32 {
    guard(|| {
        let n = n as usize;
        if n == 0 {
            return bk_gt_identity(out);
        }
        match (read_g1s(g1s, n), read_g2s(g2s, n)) {
            (Ok(ps), Ok(qs)) => {
                let gt = Bn254::multi_pairing(&ps, &qs);
                write_obj(&gt, unsafe { out_buf(out, GT_LEN) })
            }
            _ => ERR_DESERIALIZE,
        }
    })
}

// ---- wire encoding ----

#[no_mangle]
pub extern "C" fn bk_g1_compress(a: *const u8, out: *mut u8) -> i32 {
    guard(|| match read_g1(unsafe { in_buf(a, G1_LEN) }) {
        Ok(x) => match x.serialize_compressed(unsafe { out_buf(out, G1_COMP_LEN) }) {
            Ok(()) => OK,
            Err(_) => ERR_DESERIALIZE,
        },
        Err(e) => e,
    })
}

#[no_mangle]
pub extern "C" fn bk_g2_compress(a: *const u8, out: *mut u8) -> i32 {
    guard(|| match read_g2(unsafe { in_buf(a, G2_LEN) }) {
        Ok(x) => match x.serialize_compressed(unsafe { out_buf(out, G2_COMP_LEN) }) {
            Ok(()) => OK,
            Err(_) => ERR_DESERIALIZE,
        },
        Err(e) => e,
    })
}

/// Validating decompression: curve membership and prime-order subgroup.
#[no_mangle]
pub extern "C" fn bk_g1_decompress(a: *const u8, out: *mut u8) -> i32 {
    guard(
        || match G1Affine::deserialize_compressed(unsafe { in_buf(a, G1_COMP_LEN) }) {
            Ok(x) => write_obj(&x, unsafe { out_buf(out, G1_LEN) }),
            Err(_) => ERR_DESERIALIZE,
        },
    )
}

#[no_mangle]
pub extern "C" fn bk_g2_decompress(a: *const u8, out: *mut u8) -> i32 {
    guard(
        || match G2Affine::deserialize_compressed(unsafe { in_buf(a, G2_COMP_LEN) }) {
            Ok(x) => write_obj(&x, unsafe { out_buf(out, G2_LEN) }),
            Err(_) => ERR_DESERIALIZE,
        },
    )
}

/// Validate a wire GT element: canonical field encoding and r-order subgroup.
#[no_mangle]
pub extern "C" fn bk_gt_validate(a: *const u8) -> i32 {
    guard(
        || match PairingOutput::<Bn254>::deserialize_uncompressed(unsafe { in_buf(a, GT_LEN) }) {
            Ok(_) => OK,
            Err(_) => ERR_DESERIALIZE,
        },
    )
}
