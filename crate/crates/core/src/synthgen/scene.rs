use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Sprite appearance.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    /// Isotropic Gaussian alpha profile with peak `value`.
    GaussianBlob { sigma: f64, value: f64 },
    /// Opaque disc filled with seeded value noise.
    TexturedDisc { radius: f64, seed: u64 },
}

impl Shape {
    /// Radius beyond which the sprite is treated as absent.
    pub fn extent(&self) -> f64 {
        match *self {
            Shape::GaussianBlob { sigma, .. } => 3.0 * sigma,
            Shape::TexturedDisc { radius, .. } => radius,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sprite {
    /// Center at time 0, pixels.
    pub p0: [f64; 2],
    /// Pixels per frame.
    pub velocity: [f64; 2],
    /// Pixels per frame squared.
    pub acceleration: [f64; 2],
    pub shape: Shape,
}

impl Sprite {
    /// Center at time `t`.
    pub fn position(&self, t: f64) -> [f64; 2] {
        let (v, a) = (self.velocity, self.acceleration);
        [
            self.p0[0] + v[0] * t + 0.5 * a[0] * t * t,
            self.p0[1] + v[1] * t + 0.5 * a[1] * t * t,
        ]
    }

    /// Displacement `p(t1) - p(t0)`.
    pub fn displacement(&self, t0: f64, t1: f64) -> [f64; 2] {
        let (a, b) = (self.position(t0), self.position(t1));
        [b[0] - a[0], b[1] - a[1]]
    }
}

/// A canvas with sprites composited in order over a flat background.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub background: f64,
    /// Subsamples per axis per pixel.
    pub supersample: usize,
    pub sprites: Vec<Sprite>,
}

impl SceneSpec {
    pub fn new(width: usize, height: usize) -> Self {
        SceneSpec {
            width,
            height,
            background: 0.0,
            supersample: 4,
            sprites: Vec::new(),
        }
    }

    pub fn with_sprite(mut self, sprite: Sprite) -> Self {
        self.sprites.push(sprite);
        self
    }

    /// Checks that every sprite center stays at least twice its extent away
    /// from each canvas edge at time `t`.
    pub fn check_margins(&self, t: f64) -> Result<()> {
        for (i, s) in self.sprites.iter().enumerate() {
            let p = s.position(t);
            let m = 2.0 * s.shape.extent();
            let (max_x, max_y) = ((self.width - 1) as f64, (self.height - 1) as f64);
            if p[0] < m || p[1] < m || p[0] > max_x - m || p[1] > max_y - m {
                return Err(Error::invalid(format!(
                    "sprite {i} at ({:.3}, {:.3}) is within {m} px of the canvas edge at t={t}",
                    p[0], p[1]
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::invalid("canvas must be nonempty"));
        }
        if self.supersample == 0 {
            return Err(Error::invalid("supersample factor must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.background) {
            return Err(Error::invalid("background must lie in [0, 1]"));
        }
        for (i, s) in self.sprites.iter().enumerate() {
            let finite =
                s.p0.iter()
                    .chain(&s.velocity)
                    .chain(&s.acceleration)
                    .all(|v| v.is_finite());
            let shape_ok = match s.shape {
                Shape::GaussianBlob { sigma, value } => sigma > 0.0 && (0.0..=1.0).contains(&value),
                Shape::TexturedDisc { radius, .. } => radius > 0.0,
            };
            if !finite || !shape_ok {
                return Err(Error::invalid(format!("sprite {i} has invalid parameters")));
            }
        }
        Ok(())
    }

    /// Parses the line-oriented scene format:
    ///
    /// ```text
    /// # comment
    /// canvas 96 80
    /// background 0.1
    /// supersample 4
    /// sprite blob  p0x p0y vx vy ax ay sigma [value]
    /// sprite disc  p0x p0y vx vy ax ay radius seed
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut scene: Option<SceneSpec> = None;
        let mut background = None;
        let mut supersample = None;
        let mut sprites = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::Scene { line, message };
            let mut words = content.split_whitespace();
            let key = words.next().unwrap();
            let args: Vec<&str> = words.collect();
            let num = |i: usize| -> Result<f64> {
                let s = args
                    .get(i)
                    .ok_or_else(|| err(format!("missing argument {}", i + 1)))?;
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("bad number {s:?}")))
            };
            let int = |i: usize| -> Result<u64> {
                let s = args
                    .get(i)
                    .ok_or_else(|| err(format!("missing argument {}", i + 1)))?;
                s.parse::<u64>()
                    .map_err(|_| err(format!("bad integer {s:?}")))
            };
            let arity = |lo: usize, hi: usize| -> Result<()> {
                if (lo..=hi).contains(&args.len()) {
                    Ok(())
                } else {
                    Err(err(format!(
                        "{key} takes {lo}..={hi} arguments, got {}",
                        args.len()
                    )))
                }
            };
            match key {
                "canvas" => {
                    arity(2, 2)?;
                    if scene.is_some() {
                        return Err(err("duplicate canvas".into()));
                    }
                    scene = Some(SceneSpec::new(int(0)? as usize, int(1)? as usize));
                }
                "background" => {
                    arity(1, 1)?;
                    background = Some(num(0)?);
                }
                "supersample" => {
                    arity(1, 1)?;
                    supersample = Some(int(0)? as usize);
                }
                "sprite" => {
                    let kind = args.first().copied().unwrap_or("");
                    let k = |i: usize| num(i + 1);
                    let shape = match kind {
                        "blob" => {
                            arity(8, 9)?;
                            Shape::GaussianBlob {
                                sigma: k(6)?,
                                value: if args.len() == 9 { k(7)? } else { 1.0 },
                            }
                        }
                        "disc" => {
                            arity(9, 9)?;
                            Shape::TexturedDisc {
                                radius: k(6)?,
                                seed: int(8)?,
                            }
                        }
                        other => return Err(err(format!("unknown sprite kind {other:?}"))),
                    };
                    sprites.push(Sprite {
                        p0: [k(0)?, k(1)?],
                        velocity: [k(2)?, k(3)?],
                        acceleration: [k(4)?, k(5)?],
                        shape,
                    });
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        let mut scene = scene.ok_or(Error::Scene {
            line: 0,
            message: "missing canvas line".into(),
        })?;
        if let Some(b) = background {
            scene.background = b;
        }
        if let Some(s) = supersample {
            scene.supersample = s;
        }
        scene.sprites = sprites;
        scene.validate()?;
        Ok(scene)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SceneSpec::parse(&text)
    }

    /// Serializes to the text format accepted by [`SceneSpec::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "canvas {} {}\nbackground {}\nsupersample {}\n",
            self.width, self.height, self.background, self.supersample
        );
        for s in &self.sprites {
            let kin = format!(
                "{} {} {} {} {} {}",
                s.p0[0],
                s.p0[1],
                s.velocity[0],
                s.velocity[1],
                s.acceleration[0],
                s.acceleration[1]
            );
            let _ = match s.shape {
                Shape::GaussianBlob { sigma, value } => {
                    writeln!(out, "sprite blob {kin} {sigma} {value}")
                }
                Shape::TexturedDisc { radius, seed } => {
                    writeln!(out, "sprite disc {kin} {radius} {seed}")
                }
            };
        }
        out
    }
}
