// Copyright 2026 The Verdict Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Library predicates defined in Prolog. User programs may redefine any of
// these; the first user clause for a library predicate replaces it.

#pragma once

namespace vprolog {

inline constexpr const char* kPrelude = R"PL(
append([], L, L).
append([H|T], L, [H|R]) :- append(T, L, R).

append(Ls, L) :- '$append_lists'(Ls, L).
'$append_lists'([], []).
'$append_lists'([L|Ls], As) :- append(L, Ws, As), '$append_lists'(Ls, Ws).

member(X, [Y|T]) :- '$member'(T, X, Y).
'$member'(_, X, X).
'$member'([Y|T], X, _) :- '$member'(T, X, Y).

memberchk(X, L) :- member(X, L), !.

reverse(L, R) :- '$reverse'(L, [], R).
'$reverse'([], A, A).
'$reverse'([H|T], A, R) :- '$reverse'(T, [H|A], R).

nth0(I, L, E) :- integer(I), !, I >= 0, '$nth_det'(I, L, E).
nth0(I, L, E) :- var(I), !, '$nth_gen'(L, E, 0, I).
nth0(I, _, _) :- throw(error(type_error(integer, I), context(nth0/3, _))).
nth1(I, L, E) :- integer(I), !, I >= 1, I0 is I-1, '$nth_det'(I0, L, E).
nth1(I, L, E) :- var(I), !, '$nth_gen'(L, E, 1, I).
nth1(I, _, _) :- throw(error(type_error(integer, I), context(nth1/3, _))).
'$nth_det'(0, [E|_], E) :- !.
'$nth_det'(I, [_|T], E) :- I1 is I-1, '$nth_det'(I1, T, E).
'$nth_gen'([E|_], E, B, B).
'$nth_gen'([_|T], E, B0, B) :- B1 is B0+1, '$nth_gen'(T, E, B1, B).

nth0(I, L, E, R) :- integer(I), !, I >= 0, '$nth_del'(I, L, E, R).
nth0(I, L, E, R) :- var(I), '$nth_gen_del'(L, E, R, 0, I).
nth1(I, L, E, R) :- integer(I), !, I >= 1, I0 is I-1, '$nth_del'(I0, L, E, R).
nth1(I, L, E, R) :- var(I), '$nth_gen_del'(L, E, R, 1, I).
'$nth_del'(0, [E|T], E, T) :- !.
'$nth_del'(I, [H|T], E, [H|R]) :- I1 is I-1, '$nth_del'(I1, T, E, R).
'$nth_gen_del'([E|T], E, T, B, B).
'$nth_gen_del'([H|T], E, [H|R], B0, B) :- B1 is B0+1, '$nth_gen_del'(T, E, R, B1, B).

last([X], X) :- !.
last([_|T], X) :- last(T, X).

sum_list(L, S) :- '$sum_list'(L, 0, S).
'$sum_list'([], S, S).
'$sum_list'([X|Xs], S0, S) :- S1 is S0+X, '$sum_list'(Xs, S1, S).
sumlist(L, S) :- sum_list(L, S).

max_list([H|T], M) :- '$max_list'(T, H, M).
'$max_list'([], M, M).
'$max_list'([H|T], M0, M) :- M1 is max(M0, H), '$max_list'(T, M1, M).
min_list([H|T], M) :- '$min_list'(T, H, M).
'$min_list'([], M, M).
'$min_list'([H|T], M0, M) :- M1 is min(M0, H), '$min_list'(T, M1, M).

max_member(M, L) :- '$max_member'(L, M).
'$max_member'([H|T], M) :- '$max_member_'(T, H, M).
'$max_member_'([], M, M).
'$max_member_'([H|T], M0, M) :- ( H @> M0 -> M1 = H ; M1 = M0 ), '$max_member_'(T, M1, M).
min_member(M, L) :- '$min_member'(L, M).
'$min_member'([H|T], M) :- '$min_member_'(T, H, M).
'$min_member_'([], M, M).
'$min_member_'([H|T], M0, M) :- ( H @< M0 -> M1 = H ; M1 = M0 ), '$min_member_'(T, M1, M).

select(X, [X|T], T).
select(X, [H|T], [H|R]) :- select(X, T, R).

selectchk(X, L, R) :- select(X, L, R), !.

select(X, Xs, Y, Ys) :- '$select4'(Xs, X, Y, Ys).
'$select4'([X|T], X, Y, [Y|T]).
'$select4'([H|T], X, Y, [H|T2]) :- '$select4'(T, X, Y, T2).

exclude(_, [], []).
exclude(P, [H|T], R) :- ( call(P, H) -> R = R1 ; R = [H|R1] ), exclude(P, T, R1).
include(_, [], []).
include(P, [H|T], R) :- ( call(P, H) -> R = [H|R1] ; R = R1 ), include(P, T, R1).
partition(_, [], [], []).
partition(P, [H|T], I, E) :-
    (   call(P, H) -> I = [H|I1], E = E1 ; I = I1, E = [H|E1] ),
    partition(P, T, I1, E1).
partition(_, [], [], [], []).
partition(P, [H|T], L, E, G) :-
    call(P, O, H),
    '$partition5'(O, H, L, E, G, L1, E1, G1),
    partition(P, T, L1, E1, G1).
'$partition5'(<, H, [H|L], E, G, L, E, G).
'$partition5'(=, H, L, [H|E], G, L, E, G).
'$partition5'(>, H, L, E, [H|G], L, E, G).

maplist(_, []).
maplist(P, [A|As]) :- call(P, A), maplist(P, As).
maplist(_, [], []).
maplist(P, [A|As], [B|Bs]) :- call(P, A, B), maplist(P, As, Bs).
maplist(_, [], [], []).
maplist(P, [A|As], [B|Bs], [C|Cs]) :- call(P, A, B, C), maplist(P, As, Bs, Cs).
maplist(_, [], [], [], []).
maplist(P, [A|As], [B|Bs], [C|Cs], [D|Ds]) :- call(P, A, B, C, D), maplist(P, As, Bs, Cs, Ds).
maplist(_, [], [], [], [], []).
maplist(P, [A|As], [B|Bs], [C|Cs], [D|Ds], [E|Es]) :-
    call(P, A, B, C, D, E), maplist(P, As, Bs, Cs, Ds, Es).

foldl(G, L, V0, V) :- '$foldl1'(L, G, V0, V).
'$foldl1'([], _, V, V).
'$foldl1'([X|Xs], G, V0, V) :- call(G, X, V0, V1), '$foldl1'(Xs, G, V1, V).
foldl(G, L1, L2, V0, V) :- '$foldl2'(L1, L2, G, V0, V).
'$foldl2'([], [], _, V, V).
'$foldl2'([X|Xs], [Y|Ys], G, V0, V) :- call(G, X, Y, V0, V1), '$foldl2'(Xs, Ys, G, V1, V).
foldl(G, L1, L2, L3, V0, V) :- '$foldl3'(L1, L2, L3, G, V0, V).
'$foldl3'([], [], [], _, V, V).
'$foldl3'([X|Xs], [Y|Ys], [Z|Zs], G, V0, V) :-
    call(G, X, Y, Z, V0, V1), '$foldl3'(Xs, Ys, Zs, G, V1, V).

delete([], _, []).
delete([H|T], X, R) :- ( H \= X -> R = [H|R1] ; R = R1 ), delete(T, X, R1).

subtract([], _, []).
subtract([H|T], L, R) :- ( memberchk(H, L) -> R = R1 ; R = [H|R1] ), subtract(T, L, R1).
intersection([], _, []).
intersection([H|T], L, R) :- ( memberchk(H, L) -> R = [H|R1] ; R = R1 ), intersection(T, L, R1).
union([], L, L).
union([H|T], L, R) :- ( memberchk(H, L) -> R = R1 ; R = [H|R1] ), union(T, L, R1).

list_to_set(L, S) :- '$lts'(L, [], S).
'$lts'([], _, []).
'$lts'([H|T], Seen, R) :- ( '$memberchk_eq'(H, Seen) -> R = R1 ; R = [H|R1] ), '$lts'(T, [H|Seen], R1).
'$memberchk_eq'(X, [Y|Ys]) :- ( X == Y -> true ; '$memberchk_eq'(X, Ys) ).

permutation([], []).
permutation(L, [H|T]) :- select(H, L, R), permutation(R, T).

flatten(List, Flat) :- '$flatten'(List, [], Flat0), !, Flat = Flat0.
'$flatten'(Var, Tl, [Var|Tl]) :- var(Var), !.
'$flatten'([], Tl, Tl) :- !.
'$flatten'([Hd|Tl], Tail, List) :- !, '$flatten'(Hd, FlatHeadTail, List), '$flatten'(Tl, Tail, FlatHeadTail).
'$flatten'(NonList, Tl, [NonList|Tl]).

pairs_keys_values([], [], []).
pairs_keys_values([K-V|T], [K|Ks], [V|Vs]) :- pairs_keys_values(T, Ks, Vs).
pairs_keys([], []).
pairs_keys([K-_|T], [K|Ks]) :- pairs_keys(T, Ks).
pairs_values([], []).
pairs_values([_-V|T], [V|Vs]) :- pairs_values(T, Vs).

predsort(P, L, Sorted) :-
    length(L, N),
    (   N < 2 -> '$predsort_small'(P, L, Sorted)
    ;   '$predsort'(P, N, L, _, Sorted1), Sorted = Sorted1
    ).
'$predsort_small'(_, [], []).
'$predsort_small'(_, [X], [X]).
'$predsort'(P, 2, [X1,X2|L], L, R) :- !,
    call(P, Delta, X1, X2),
    '$sort2'(Delta, X1, X2, R).
'$predsort'(_, 1, [X|L], L, [X]) :- !.
'$predsort'(_, 0, L, L, []) :- !.
'$predsort'(P, N, L1, L3, R) :-
    N1 is N // 2, plus(N1, N2, N),
    '$predsort'(P, N1, L1, L2, R1),
    '$predsort'(P, N2, L2, L3, R2),
    '$predmerge'(P, R1, R2, R).
'$sort2'(<, X1, X2, [X1,X2]).
'$sort2'(=, X1, _, [X1]).
'$sort2'(>, X1, X2, [X2,X1]).
'$predmerge'(_, [], R, R) :- !.
'$predmerge'(_, R, [], R) :- !.
'$predmerge'(P, [H1|T1], [H2|T2], Result) :-
    call(P, Delta, H1, H2), !,
    '$predmerge_'(Delta, P, H1, H2, T1, T2, Result).
'$predmerge_'(<, P, H1, H2, T1, T2, [H1|R]) :- '$predmerge'(P, T1, [H2|T2], R).
'$predmerge_'(=, P, H1, _, T1, T2, [H1|R]) :- '$predmerge'(P, T1, T2, R).
'$predmerge_'(>, P, H1, H2, T1, T2, [H2|R]) :- '$predmerge'(P, [H1|T1], T2, R).

aggregate_all(count, G, C) :- !, findall(x, G, L), length(L, C).
aggregate_all(count(T), G, C) :- !, findall(T, G, L), length(L, C).
aggregate_all(sum(E), G, S) :- !, findall(E, G, L), sum_list(L, S).
aggregate_all(max(E), G, M) :- !, findall(E, G, L), L \== [], max_list(L, M).
aggregate_all(min(E), G, M) :- !, findall(E, G, L), L \== [], min_list(L, M).
aggregate_all(max(E, W), G, max(M, MW)) :- !,
    findall(E-W, G, L), L = [H|T], '$max_pair'(T, H, M-MW).
aggregate_all(min(E, W), G, min(M, MW)) :- !,
    findall(E-W, G, L), L = [H|T], '$min_pair'(T, H, M-MW).
aggregate_all(bag(E), G, L) :- !, findall(E, G, L).
aggregate_all(set(E), G, S) :- !, findall(E, G, L), sort(L, S).
'$max_pair'([], P, P).
'$max_pair'([E-W|T], E0-W0, P) :- ( E > E0 -> '$max_pair'(T, E-W, P) ; '$max_pair'(T, E0-W0, P) ).
'$min_pair'([], P, P).
'$min_pair'([E-W|T], E0-W0, P) :- ( E < E0 -> '$min_pair'(T, E-W, P) ; '$min_pair'(T, E0-W0, P) ).

bagof(T, G, L) :-
    '$free_vars'(T^G, W, G1),
    (   W == v
    ->  findall(T, G1, L), L \== []
    ;   findall(W-T, G1, Ps), Ps \== [],
        keysort(Ps, S), '$bag_groups'(S, Gs), member(W-L, Gs)
    ).
setof(T, G, S) :- bagof(T, G, L), sort(L, S).
'$bag_groups'([], []).
'$bag_groups'([K-V|T], [K-[V|Vs]|Gs]) :- '$bag_same'(K, T, Vs, Rest), '$bag_groups'(Rest, Gs).
'$bag_same'(K, [K1-V|T], [V|Vs], Rest) :- K1 == K, !, '$bag_same'(K, T, Vs, Rest).
'$bag_same'(_, L, [], L).

setup_call_cleanup(S, G, C) :-
    once(S),
    catch(G, E, true),
    ignore(C),
    ( nonvar(E) -> throw(E) ; true ).
call_cleanup(G, C) :- setup_call_cleanup(true, G, C).

phrase(G, L) :- phrase(G, L, []).
phrase(G, L, R) :- call(G, L, R).

concat_atom(L, R) :- atomic_list_concat(L, R).
concat_atom(L, S, R) :- atomic_list_concat(L, S, R).


apply(G, Args) :- G =.. L0, append(L0, Args, L1), G1 =.. L1, call(G1).

'>>'(Ps, B) :- '$lambda_copy'(Ps>>B, _>>B1), call(B1).
'>>'(Ps, B, A1) :- '$lambda_copy'(Ps>>B, Ps1>>B1), '$lambda_params'(Ps1, [A1], R), '$lambda_call'(B1, R).
'>>'(Ps, B, A1, A2) :-
    '$lambda_copy'(Ps>>B, Ps1>>B1), '$lambda_params'(Ps1, [A1,A2], R), '$lambda_call'(B1, R).
'>>'(Ps, B, A1, A2, A3) :-
    '$lambda_copy'(Ps>>B, Ps1>>B1), '$lambda_params'(Ps1, [A1,A2,A3], R), '$lambda_call'(B1, R).
'>>'(Ps, B, A1, A2, A3, A4) :-
    '$lambda_copy'(Ps>>B, Ps1>>B1), '$lambda_params'(Ps1, [A1,A2,A3,A4], R), '$lambda_call'(B1, R).
'>>'(Ps, B, A1, A2, A3, A4, A5) :-
    '$lambda_copy'(Ps>>B, Ps1>>B1), '$lambda_params'(Ps1, [A1,A2,A3,A4,A5], R), '$lambda_call'(B1, R).
'$lambda_copy'(L, C) :-
    copy_term(L, C),
    ( L = (F/_>>_), C = (F1/_>>_) -> F1 = F ; true ).
'$lambda_params'(_/Ps, As, R) :- !, '$lambda_params'(Ps, As, R).
'$lambda_params'([], As, As) :- !.
'$lambda_params'([P|Ps], [A|As], R) :- !, P = A, '$lambda_params'(Ps, As, R).
'$lambda_params'(_, [], []).
'$lambda_call'(B, []) :- !, call(B).
'$lambda_call'(B, Extra) :- G =.. [call, B|Extra], call(G).

list_to_ord_set(L, S) :- sort(L, S).
ord_union(A, B, C) :- append(A, B, AB), sort(AB, C).
ord_union(Ls, S) :- append(Ls, L), sort(L, S).
ord_subtract(A, B, C) :- subtract(A, B, C).
ord_intersection(A, B, C) :- intersection(A, B, C).
ord_memberchk(X, L) :- memberchk(X, L).
ord_insert(S, E, S2) :- ord_union(S, [E], S2).
ord_add_element(S, E, S2) :- ord_union(S, [E], S2).
ord_del_element(S, E, S2) :- ord_subtract(S, [E], S2).
ord_subset(A, B) :- subtract(A, B, []).
ord_empty([]).

empty_assoc(t).
put_assoc(K, t, V, t(K,V,t,t)) :- !.
put_assoc(K, t(K0,V0,L,R), V, T) :-
    compare(O, K, K0),
    (   O = (=) -> T = t(K0,V,L,R)
    ;   O = (<) -> put_assoc(K, L, V, L1), T = t(K0,V0,L1,R)
    ;   put_assoc(K, R, V, R1), T = t(K0,V0,L,R1)
    ).
get_assoc(K, t(K0,V0,L,R), V) :-
    compare(O, K, K0),
    (   O = (=) -> V = V0
    ;   O = (<) -> get_assoc(K, L, V)
    ;   get_assoc(K, R, V)
    ).
list_to_assoc(L, A) :- '$lta'(L, t, A).
'$lta'([], A, A).
'$lta'([K-V|T], A0, A) :- put_assoc(K, A0, V, A1), '$lta'(T, A1, A).
assoc_to_list(t, []).
assoc_to_list(t(K,V,L,R), List) :- assoc_to_list(L, LL), assoc_to_list(R, RL), append(LL, [K-V|RL], List).
assoc_to_keys(A, Ks) :- assoc_to_list(A, L), pairs_keys(L, Ks).
assoc_to_values(A, Vs) :- assoc_to_list(A, L), pairs_values(L, Vs).

)PL";

}  // namespace vprolog
