//! The TNS1 binary tensor format and PGM/PPM images.

use tubal::io::{decode, decode_pnm, encode_mask, encode_pnm, encode_tensor, read_tensor, write_tensor, TensorFile};
use tubal::synth::{random_mask, synth_low_tubal_rank};

fn main() -> tubal::Result<()> {
    let a = synth_low_tubal_rank((4, 3, 2), 1, 0)?;
    let bytes = encode_tensor(&a)?;
    println!("f64 tensor: {} bytes, header {:02x?}", bytes.len(), &bytes[..17]);
    assert_eq!(decode(&bytes)?, TensorFile::Dense(a.clone()));

    let mask = random_mask(a.dims(), 0.5, 1)?;
    let bytes = encode_mask(&mask)?;
    println!("mask: {} bytes, payload {:?}", bytes.len(), &bytes[17..]);

    let path = std::env::temp_dir().join("tubal_example.tns");
    write_tensor(&path, &a)?;
    let back = read_tensor(&path)?.into_dense()?;
    println!("file round trip exact: {}", back == a);

    match decode(b"TNS1\x00") {
        Err(e) => println!("truncated file: {e}"),
        Ok(_) => unreachable!(),
    }

    let pgm = b"P5\n2 2\n255\n\x00\x40\x80\xff";
    let img = decode_pnm(pgm)?;
    println!("PGM as tensor {:?}: {:?}", img.dims(), img.as_slice());
    println!("re-encoded: {:?}", String::from_utf8_lossy(&encode_pnm(&img)?[..11]));
    Ok(())
}
