// A receiver of a base struct accepts a value of an embedding struct.
// expected: no-deadlock
package main

import "fmt"

type User struct {
	name string
}

type Faculty struct {
	User
	dept string
}

func main() {
	ch := make(chan User)
	go func() {
		ch <- Faculty{}
	}()
	fmt.Println(<-ch)
}
