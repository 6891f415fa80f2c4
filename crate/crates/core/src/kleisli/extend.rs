//! Word-level extension of a plain profunctor `A ⇸ B` to one between the
//! word categories over `A` and `B`, via the elements factorization: take
//! `m ≅ star(q) ∘ costar(p)`, apply the word construction to `p` and `q`,
//! and compose `star` and `costar` again at word level.

use crate::doctrine::{map_arity, map_word, s_functor, ArityMap, Doctrine, SCategory, Word};
use crate::fincat::Functor;
use crate::ids::{ElemId, MorId, ObjId};
use crate::profunctor::{
    costar, elements_factorization, star, compose_prof, Composite, ElementsFactorization,
    ProfCell, Profunctor,
};

pub struct SExtension {
    pub doctrine: Doctrine,
    pub bound: usize,
    /// Words over the source boundary of `m`.
    pub source_words: SCategory,
    /// Words over the target boundary of `m`.
    pub target_words: SCategory,
    /// Words over the category of elements of `m`.
    pub elem_words: SCategory,
    pub factorization: ElementsFactorization,
    /// Letterwise projection of element words onto source words.
    pub sp: Functor,
    /// Letterwise projection of element words onto target words.
    pub sq: Functor,
    /// The extension itself as a coend presentation; `composite.prof`
    /// is the profunctor between the materialized word categories.
    pub composite: Composite,
}

impl SExtension {
    pub fn prof(&self) -> &Profunctor {
        &self.composite.prof
    }
}

pub fn s_extend(m: &Profunctor, d: Doctrine, bound: usize) -> SExtension {
    let factorization = elements_factorization(m);
    let source_words = SCategory::new(m.source.clone(), d, bound);
    let target_words = SCategory::new(m.target.clone(), d, bound);
    let elem_words = SCategory::new(factorization.category.clone(), d, bound);
    let sp = s_functor(&factorization.p, &elem_words, &source_words);
    let sq = s_functor(&factorization.q, &elem_words, &target_words);
    let composite =
        compose_prof(&star(&sq), &costar(&sp)).expect("word-level boundaries agree");
    SExtension {
        doctrine: d,
        bound,
        source_words,
        target_words,
        elem_words,
        factorization,
        sp,
        sq,
        composite,
    }
}

/// For `m = star(f)` the extension is canonically bijective to
/// `star(s_functor(f))`.  Returns the two inverse cells, with the
/// comparison target built from `f` (which must present the same `m`
/// the extension was computed from).
pub fn star_extension_cells(ext: &SExtension, f: &Functor) -> (ProfCell, ProfCell) {
    let b_cat = f.target.clone();
    let sf = s_functor(f, &ext.source_words, &ext.target_words);
    let star_sf = star(&sf);
    let to = ProfCell::from_fn(ext.prof(), &star_sf, |bw, aw, cls| {
        let (e_obj, u_elem, v_elem) = ext.composite.rep(bw, aw, cls);
        let u = ext.target_words.arity(&MorId::new(u_elem.as_str()));
        let v = ext.source_words.arity(&MorId::new(v_elem.as_str()));
        let e_word = ext.elem_words.word(e_obj);
        // The comparison `Sq 𝐞 → Sf Sp 𝐞` whose arrows are the elements
        // themselves, read as morphisms of the target category.
        let arrows: Vec<MorId> = e_word
            .letters()
            .iter()
            .map(|e| MorId::new(ext.factorization.coord(e).2.as_str()))
            .collect();
        let compare = ArityMap::new(
            ext.doctrine,
            map_word(&ext.factorization.q, e_word),
            map_word(f, &map_word(&ext.factorization.p, e_word)),
            (0..e_word.len()).collect(),
            arrows,
            &b_cat,
        )
        .expect("element arrows bridge the two projections");
        let value = map_arity(f, v).compose(&compare.compose(u, &b_cat), &b_cat);
        ElemId::new(ext.target_words.mor(&value).as_str())
    });
    let from = ProfCell::from_fn(&star_sf, ext.prof(), |bw, aw, x| {
        let xm = ext.target_words.arity(&MorId::new(x.as_str()));
        let bword = ext.target_words.word(bw);
        let aword = ext.source_words.word(aw);
        let letters: Vec<ObjId> = (0..aword.len())
            .map(|j| {
                ext.factorization.object(
                    &bword.letters()[xm.index[j]],
                    &aword.letters()[j],
                    &ElemId::new(xm.arrows[j].as_str()),
                )
            })
            .collect();
        let e_word = Word::new(letters);
        let u = ArityMap::pure(
            ext.doctrine,
            bword.clone(),
            map_word(&ext.factorization.q, &e_word),
            xm.index.clone(),
            &b_cat,
        )
        .expect("the element word projects back onto the matched letters");
        let v = ArityMap::identity(ext.doctrine, aword.clone(), &f.source);
        let u_elem = ElemId::new(ext.target_words.mor(&u).as_str());
        let v_elem = ElemId::new(ext.source_words.mor(&v).as_str());
        ext.composite
            .class(bw, aw, ext.elem_words.obj(&e_word), &u_elem, &v_elem)
            .clone()
    });
    (to, from)
}
