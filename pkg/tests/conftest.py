import pytest

# Golden annotation corpus: (name, text, is_fragment).  Fragments are
# sub-sentential constituents (noun phrases, verb phrases, macro bodies).
GOLDENS = [
    ("want-eat-cake",
     "(she.pro ((pres want.v) (to (eat.v (the.d cake.n)))))", False),
    ("dial-for-me",
     "(((pres could.aux-v) you.pro (dial.v {ref1}.pro (adv-a (for.p me.pro)))) ?)",
     False),
    ("if-i-were-you",
     "((if.ps (i.pro ((cf were.v) (= you.pro)))) "
     "(i.pro ((cf will.aux-s) (be.v (able.a (to succeed.v))))))", False),
    ("flowers-weak-creatures",
     "((k (plur flower.n)) ((pres be.v) (weak.a (plur creature.n))))", False),
    ("very-few-debate",
     "(((fquan (very.mod-a few.a)) (plur person.n)) "
     "(still.adv-s (debate.v (the.d (n+preds fact.n "
     "(= (that ((the.d |Earth|.n) ((pres prog) heat_up.v)))))))))", False),
    ("alice-certainly", "(|Alice| certainly.adv-s ((pres know.v) |Bob|))", False),
    ("speak-sternly", "((past speak.v) sternly.adv-a (to.p-arg |Bob|))", True),
    ("bob-owns-dog", "(|Bob| ((pres own.v) (a.d dog.n)))", False),
    ("in-rome-and-happy", "((in.p |Rome|) and.cc happy.a)", True),
    ("walk-raw", "(walk.v (adv-a (with.p |Bob|)))", True),
    ("walk-post", "((adv-a (with.p |Bob|)) walk.v)", True),
    ("burning-hot-raw", "((burning.a hot.a) (melting.n pot.n))", True),
    ("burning-hot-post",
     "((mod-n ((mod-a burning.a) hot.a)) ((mod-n melting.n) pot.n))", True),
    ("buildings-npreds",
     "(the.d (n+preds (plur building.n) (in.p (the.d city.n))))", True),
    ("buildings-lambda",
     "(the.d (λ x ((x (plur building.n)) and.cc (x (in.p (the.d city.n))))))",
     True),
    ("wooden-shoe", "((mod-n wooden.a) shoe.n)", True),
    ("ice-pick", "((mod-n ice.n) pick.n)", True),
    ("fake-ruby", "(fake.mod-n ruby.n)", True),
    ("worldly-wise", "((mod-a worldly.a) wise.a)", True),
    ("very-fit", "(very.mod-a fit.a)", True),
    ("slyly-grin", "(slyly.adv-a grin.v)", True),
    ("perhaps", "perhaps.adv-s", True),
    ("without-doubt", "(adv-s (without.p (a.d doubt.n)))", True),
    ("during-drought", "(adv-e (during.p (the.d drought.n)))", True),
    ("in-rome-adv", "(adv-e (in.p |Rome|))", True),
    ("three-times", "(adv-f ({at}.p (three.d (plur time.n))))", True),
    ("sub-row", "(sub A (B *h))", True),
    ("rep-row", "(rep (A *p) B)", True),
    ("npreds-row", "(n+preds dog.n red.a)", True),
    ("nppreds-row", "(np+preds he.pro red.a)", True),
    ("poss-row", "((|John| 's) dog.n)", True),
    ("topicalization",
     "(sub swiftly.adv-a ((the.d fox.n) ((past run.v) away.adv-a *h)))", False),
    ("topicalization-out",
     "((the.d fox.n) ((past run.v) away.adv-a swiftly.adv-a))", False),
    ("coffee-rel",
     "(the.d (n+preds coffee.n (sub that.rel (you.pro ((past drink.v) *h)))))",
     True),
    ("coffee-final",
     "(the.d (λ y ((y coffee.n) and.cc (you.pro ((past drink.v) y)))))", True),
    ("seattle-raw", "(|Seattle| skyline.n)", True),
    ("seattle-post", "((nnp |Seattle|) skyline.n)", True),
    ("very-happy-dog", "((mod-n (very.mod-n happy.a)) dog.n)", True),
    ("play-with-dog", "(play.v (adv-a (with.p (a.d dog.n))))", True),
    ("show-up-surprise", "(show_up.v (adv-s (to.p (my.d surprise.n))))", True),
    ("eat-at-cafe", "(eat.v (adv-e (at.p (a.d cafe.n))))", True),
    ("run-often", "(run.v (adv-f (very.mod-a often.a)))", True),
    ("he-plays-with-dog", "(he.pro (play.v (adv-a (with.p (a.d dog.n)))))", False),
    ("she-eats-at-cafe", "(she.pro (eat.v (adv-e (at.p (a.d cafe.n)))))", False),
    ("that-grass-red", "(that ((k grass.n) red.a))", True),
    ("every-dog-runs", "((every.d dog.n) (pres run.v))", False),
    ("like-every-dog", "(i.pro ((pres like.v) (every.d dog.n)))", False),
    ("john-runs", "(|John| (pres run.v))", False),
    ("they-run", "(they.pro (pres run.v))", False),
    ("like-john", "(i.pro ((pres like.v) |John|))", False),
    ("like-them", "(i.pro ((pres like.v) they.pro))", False),
    ("manage-quit",
     "(she.pro ((past manage.v) (to (quit.v (ka smoke.v)))))", False),
    ("quit-smoking", "(she.pro ((past quit.v) (ka smoke.v)))", False),
]


@pytest.fixture(scope="session")
def goldens():
    return GOLDENS


@pytest.fixture(scope="session")
def golden_sentences():
    return [(n, t) for n, t, frag in GOLDENS if not frag]


@pytest.fixture(scope="session")
def golden_texts():
    return [t for _, t, _ in GOLDENS]
