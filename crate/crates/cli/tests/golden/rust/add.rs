pub enum nat<'a> {
  O(PhantomData<&'a ()>),
  S(PhantomData<&'a ()>, &'a nat<'a>)
}

struct Program {
  __alloc: bumpalo::Bump,
}

impl<'a> Program {
  fn new() -> Self {
    Program {
      __alloc: bumpalo::Bump::new(),
    }
  }

  fn alloc<T>(&'a self, t: T) -> &'a T {
    self.__alloc.alloc(t)
  }

  fn closure<TArg, TRet>(&'a self, F: impl Fn(TArg) -> TRet + 'a) -> &'a dyn Fn(TArg) -> TRet {
    self.__alloc.alloc(F)
  }

  fn add(&'a self, n: &'a nat<'a>, m: &'a nat<'a>) -> &'a nat<'a> {
    match n {
      &nat::O(_) => { m },
      &nat::S(_, p) => { self.alloc(nat::S(PhantomData, self.add(p, m))) },
    }
  }
  fn add__curried(&'a self) -> &'a dyn Fn(&'a nat<'a>) -> &'a dyn Fn(&'a nat<'a>) -> &'a nat<'a> {
    self.closure(move |n| { self.closure(move |m| { self.add(n, m) }) })
  }
}
