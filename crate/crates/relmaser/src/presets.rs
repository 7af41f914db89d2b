//! Built-in scenarios for the OH 1612 MHz working points of Figs. 1–5.

/// Rest-frame sample length (m).
pub const LENGTH: f64 = 4.2e13;
/// T₁′ (s).
pub const T1: f64 = 0.1;
/// T₂′ (s).
pub const T2: f64 = 1.2e-3;
/// Rest-frame simulated duration (s).
pub const TAU_MAX: f64 = 0.1;
/// Offset of the separated channels in units of dv′.
pub const SEPARATION_K: i64 = 20;

const BETAS: [(&str, f64); 3] = [("beta0", 0.0), ("beta05", 0.5), ("beta-05", -0.5)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Figure::Fig1 => "n't = 2e4 /m3, one channel: superradiant burst, then saturated maser",
            Figure::Fig2 => "n't = 6e3 /m3, one channel: no burst, unsaturated maser",
            Figure::Fig3 => "beta = 0: one channel of 6e3, two aligned channels of 6e3, two channels 40 dv' apart",
            Figure::Fig4 => "two channels of 6e3 at k = -20, +20",
            Figure::Fig5 => "two channels of 1.2e4 at k = -20, +20",
        }
    }

    /// Preset names belonging to this figure.
    pub fn presets(self) -> Vec<String> {
        match self {
            Figure::Fig3 => ["fig3-single", "fig3-aligned", "fig3-separated"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            _ => BETAS
                .iter()
                .map(|(tag, _)| format!("{}-{tag}", self.label()))
                .collect(),
        }
    }
}

/// Every preset name, in figure order.
pub fn names() -> Vec<String> {
    Figure::ALL.iter().flat_map(|f| f.presets()).collect()
}

struct Definition {
    beta: f64,
    channels: Vec<(i64, f64)>,
    plot: &'static str,
}

fn definition(name: &str) -> Option<Definition> {
    let (fig, rest) = name.split_once('-')?;
    let beta = BETAS.iter().find(|(tag, _)| *tag == rest).map(|(_, b)| *b);
    let pair = |n| vec![(-SEPARATION_K, n), (SEPARATION_K, n)];
    let def = match (fig, rest, beta) {
        ("fig1", _, Some(beta)) => Definition {
            beta,
            channels: vec![(0, 2e4)],
            plot: "linear",
        },
        ("fig2", _, Some(beta)) => Definition {
            beta,
            channels: vec![(0, 6e3)],
            plot: "log",
        },
        ("fig3", "single", _) => Definition {
            beta: 0.0,
            channels: vec![(0, 6e3)],
            plot: "log",
        },
        ("fig3", "aligned", _) => Definition {
            beta: 0.0,
            channels: vec![(0, 6e3), (0, 6e3)],
            plot: "log",
        },
        ("fig3", "separated", _) => Definition {
            beta: 0.0,
            channels: pair(6e3),
            plot: "log",
        },
        ("fig4", _, Some(beta)) => Definition {
            beta,
            channels: pair(6e3),
            plot: "log",
        },
        ("fig5", _, Some(beta)) => Definition {
            beta,
            channels: pair(1.2e4),
            plot: "log",
        },
        _ => return None,
    };
    Some(def)
}

fn float(x: f64) -> String {
    let s = format!("{x:?}");
    if s.contains(['.', 'e']) {
        s
    } else {
        format!("{s}.0")
    }
}

/// The scenario document of a preset, or `None` for an unknown name.
pub fn document(name: &str) -> Option<String> {
    let def = definition(name)?;
    let mut doc = format!(
        "name = \"{name}\"\n\n\
         [transition]\n\
         preset = \"oh1612\"\n\n\
         [sample]\n\
         length = {length}  # m\n\n\
         [timescales]\n\
         t1 = {t1}  # s\n\
         t2 = {t2}  # s\n\n\
         [frame]\n\
         beta = {beta}\n\n\
         [grid]\n\
         n_z = 500\n\
         steps_per_tr = 50.0\n\
         tau_max = {tau_max}  # s, rest frame\n\n",
        length = float(LENGTH),
        t1 = float(T1),
        t2 = float(T2),
        beta = float(def.beta),
        tau_max = float(TAU_MAX),
    );
    for (k, ntot) in &def.channels {
        doc.push_str(&format!(
            "[[channels]]\nk = {k}\nntot = {}  # 1/m3\n\n",
            float(*ntot)
        ));
    }
    doc.push_str(&format!(
        "[boundary]\n\
         intensity = 0.0  # W/m2\n\n\
         [output]\n\
         record_stride = 10\n\
         plot = \"{}\"\n",
        def.plot
    ));
    Some(doc)
}
